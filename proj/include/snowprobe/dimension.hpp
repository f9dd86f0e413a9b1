#pragma once

#include <cstdint>
#include <vector>

#include "snowprobe/exec.hpp"
#include "snowprobe/metric_space.hpp"

namespace snowprobe {

struct FarthestPointOrdering {
  std::vector<PointId> order;  // starts at index 0
  // Distance from each inserted point to the net built before it; +inf for
  // the seed. Non-increasing, and the first k points form an r-net for any
  // r >= insertion_distance[k].
  std::vector<double> insertion_distance;
};

FarthestPointOrdering farthest_point_ordering(const FiniteMetricSpace& space,
                                              Exec exec = Exec::Parallel);

struct BoxCountRecord {
  double scale = 0.0;
  std::size_t count = 0;  // greedy r-net size at this scale
};

struct DimensionEstimate {
  double slope = 0.0;     // least squares of log N(r) against log(1/r)
  double residual = 0.0;  // root-mean-square fit residual
  std::vector<BoxCountRecord> records;
};

// Greedy net counts per scale from one farthest-point sweep; needs >= 3
// positive scales spanning at least a decade.
DimensionEstimate box_dimension(const FiniteMetricSpace& space,
                                const std::vector<double>& scales,
                                Exec exec = Exec::Parallel);

// Eight logarithmic scales across [diam/64, diam/4].
std::vector<double> default_box_scales(const FiniteMetricSpace& space);

struct DoublingEstimate {
  std::size_t c_hat = 0;  // worst observed half-radius cover size
  std::vector<double> radii;
  std::size_t centers_tested = 0;
};

// Greedy half-radius covers of sampled balls; c_hat lower-bounds the true
// doubling constant.
DoublingEstimate doubling_constant(const FiniteMetricSpace& space,
                                   const std::vector<double>& radii,
                                   std::size_t center_budget,
                                   std::uint64_t seed,
                                   Exec exec = Exec::Parallel);

struct SphereGap {
  double radius = 0.0;
  double gap = 0.0;  // min over points of |d(x0, z) - radius|
  bool within = false;
};

// Probes whether the distance-from-x0 map hits each radius up to gap_tol;
// discrete value sets (ultrametric-like spaces) leave large gaps.
std::vector<SphereGap> sphere_surjectivity(const FiniteMetricSpace& space,
                                           PointId x0,
                                           const std::vector<double>& radii,
                                           double gap_tol);

}  // namespace snowprobe
