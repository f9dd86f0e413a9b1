#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "snowprobe/descriptors.hpp"
#include "snowprobe/exec.hpp"

namespace snowprobe {

struct DyadicSchedule {
  double delta = 0.5;
  int depth = 0;
  // 2^depth + 1 sorted endpoints of [0,1]; every interval splits into a left
  // share of delta and a right share of 1-delta at the next depth.
  std::vector<double> endpoints;
};

DyadicSchedule build_schedule(double delta, int n);

class GeodesicConstructionError : public std::runtime_error {
 public:
  GeodesicConstructionError(double s, double u, double residual);
  double s, u;      // parameter interval whose split went wrong
  double residual;  // worst relative deviation from the two equations
};

// Rule mapping (x', y') to z' with d(x',z') = delta d(x',y') and
// d(z',y') = (1-delta) d(x',y'); checked per invocation by the constructor.
class BetweenOracle {
 public:
  using Placer = std::function<Point(const Point&, const Point&)>;

  // z' = x' + delta (y' - x'); exact on normed spaces and on single-axis
  // mixed-product segments with exponent 1, and deliberately wrong on
  // snowflaked ones (the check reports it).
  static BetweenOracle linear(const SpaceDescriptor& desc, double delta);
  // Candidate minimizing the worse equation residual, earliest tie wins.
  static BetweenOracle search(const SpaceDescriptor& desc, double delta,
                              std::vector<Point> candidates);
  static BetweenOracle custom(const SpaceDescriptor& desc, double delta,
                              Placer placer);

  const SpaceDescriptor& space() const { return desc_; }
  double delta() const { return delta_; }
  Point place(const Point& x, const Point& y) const { return placer_(x, y); }

 private:
  BetweenOracle(const SpaceDescriptor& desc, double delta);
  SpaceDescriptor desc_;
  double delta_;
  Placer placer_;
};

struct GeodesicApprox {
  SpaceDescriptor space;
  DyadicSchedule schedule;
  std::vector<Point> points;  // aligned with schedule.endpoints
  double base_distance = 0.0;
};

// gamma(0) = x, gamma(1) = y, and every split point comes from the oracle;
// equation residuals beyond check_tol abort with the offending interval.
GeodesicApprox construct_geodesic(const BetweenOracle& oracle, const Point& x,
                                  const Point& y, double delta, int n,
                                  double check_tol = 1e-10);

struct IsometryDeviation {
  double max_defect = 0.0;
  double s = 0.0, t = 0.0;  // worst parameter pair
};

// Exhaustive |d(gamma(s),gamma(t)) - |s-t| d(x,y)| / d(x,y) over all
// endpoint pairs; quadratic in 2^depth, so depth is capped at 12.
IsometryDeviation isometry_defect(const GeodesicApprox& g,
                                  Exec exec = Exec::Parallel);

}  // namespace snowprobe
