#pragma once

#include <cstdint>
#include <vector>

#include "snowprobe/exec.hpp"
#include "snowprobe/metric_space.hpp"

namespace snowprobe {

struct BetweennessCertificate {
  PointId x = -1, z = -1, y = -1;  // z lies between x and y
  double defect = 0.0;             // d(x,z) + d(z,y) - d(x,y)
};

// All triples with defect <= rel_tol * d(x,y), sorted by defect ascending
// (ties by indices). Empty means no approximate between-point at this
// tolerance.
std::vector<BetweennessCertificate> find_between_points(
    const FiniteMetricSpace& space, double rel_tol = 1e-9,
    Exec exec = Exec::Parallel);

struct LensQuery {
  PointId x = -1, y = -1;
  double lambda = 0.5;
  double delta = 0.0;
};

// Points z with d(x,z) <= (lambda+delta) d(x,y) and
// d(z,y) <= (1-lambda+delta) d(x,y); the endpoints themselves qualify when
// the radius inequalities allow. Ascending index order.
std::vector<PointId> lens_members(const FiniteMetricSpace& space,
                                  const LensQuery& q);

// min over z outside {x,y} of max(d(x,z), d(z,y)) / d(x,y) - 1/2. The
// lambda = 1/2 lens at margin delta is non-empty exactly when this is
// <= delta. +inf with fewer than 3 points.
double midpoint_defect(const FiniteMetricSpace& space, PointId x, PointId y);

struct PairLensWitness {
  PointId x = -1, y = -1;
  double lambda = 0.0;  // empty-lens parameter for this pair
};

struct NonConvexityOutcome {
  bool certified = false;
  // Certified: the largest grid delta at which every scanned pair has an
  // empty lens for some grid lambda. Refuted: the largest delta attempted.
  double delta = 0.0;
  std::vector<double> lambda_grid;  // grid filtered to (delta, 1-delta)
  std::vector<PairLensWitness> pair_entries;  // certified case, per pair
  // Refuted case: first failing pair plus the lowest-index lens member at
  // each grid lambda.
  PointId refuted_x = -1, refuted_y = -1;
  std::vector<PointId> lens_witnesses;
  std::size_t pairs_scanned = 0;
};

std::vector<double> default_delta_grid();   // 0.01 .. 0.49 step 0.01
std::vector<double> default_lambda_grid();  // 99 even interior points

// Scans deltas descending; certifies at the first delta where every sampled
// pair admits an empty lens, otherwise refutes at the grid maximum. Pairs
// are all pairs when they fit the budget, else a seeded distinct sample.
NonConvexityOutcome uniform_nonconvexity(
    const FiniteMetricSpace& space, const std::vector<double>& delta_grid,
    const std::vector<double>& lambda_grid, std::size_t pair_budget,
    std::uint64_t seed, Exec exec = Exec::Parallel);

}  // namespace snowprobe
