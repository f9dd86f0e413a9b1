#pragma once

#include <iosfwd>
#include <string>

#include "snowprobe/metric_space.hpp"

namespace snowprobe {

struct LoadedSpace {
  FiniteMetricSpace space;
  // Generator string recorded by `snowprobe generate`, empty when absent.
  std::string descriptor;
};

// {"labels": [...], "matrix": [[...]]} with optional "descriptor" echo.
LoadedSpace read_space_json(std::istream& in);
// n rows of n comma-separated reals, optional leading row of labels.
LoadedSpace read_space_csv(std::istream& in);
// Dispatches on a ".csv" suffix, JSON otherwise.
LoadedSpace read_space_file(const std::string& path);

std::string space_to_json(const FiniteMetricSpace& space,
                          const std::string& descriptor = "");
std::string space_to_csv(const FiniteMetricSpace& space);

}  // namespace snowprobe
