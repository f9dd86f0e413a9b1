#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "snowprobe/exec.hpp"
#include "snowprobe/metric_space.hpp"

namespace snowprobe {

// Pair context with the space rescaled so d(a, b) is exactly 1.
struct GaugeContext {
  FiniteMetricSpace space;
  PointId a = 0;
  PointId b = 0;

  static GaugeContext make(const FiniteMetricSpace& base, PointId a,
                           PointId b);
};

// phi(p) = min over x of d(a,x)^p + d(x,b)^p; always <= 1 (x = a attains 1)
// and non-increasing in p. Equals 1 for every p exactly when no point cuts
// the pair, which is what taking d^p preserves up to p_star.
double gauge(const GaugeContext& ctx, double p);

std::vector<std::pair<double, double>> gauge_scan(const GaugeContext& ctx,
                                                  double p_min, double p_max,
                                                  int steps);

struct SolverTrace {
  std::int64_t iterations = 0;
  double bracket_width = 0.0;
};

// Thrown when a triple already violates the triangle inequality at p = 1.
class InvalidTripleError : public std::runtime_error {
 public:
  InvalidTripleError(PointId x, PointId z, PointId y, double a, double b);
  PointId x, z, y;  // base pair (x, y), through point z; -1 when detached
  double a, b;      // legs normalized by the base distance
};

// Root of a^p + b^p = 1 for the largest-side-normalized legs of one triple;
// +inf when max(a,b) is within abs_tol of 1 (or the root exceeds 2^20), and
// exactly 1 when a + b = 1 within abs_tol.
double triple_critical_exponent(double d_xy, double d_xz, double d_zy,
                                double abs_tol = 1e-12,
                                SolverTrace* trace = nullptr);

struct TripleExponent {
  PointId x = -1, z = -1, y = -1;  // base pair (x, y), largest side
  double a = 0.0, b = 0.0;
  double p_crit = 0.0;  // +inf when the triple never binds
};

struct CriticalExponentResult {
  double p_star = 0.0;  // +inf when no triple binds (ultrametric-like)
  std::optional<TripleExponent> witness;
  SolverTrace trace;  // solve of the witness triple
};

// Minimum of triple_critical_exponent over all triples, each oriented with
// its largest side as base (ties by smallest index tuple). The witness is
// the lexicographically smallest (p_crit, x, z, y); fewer than 3 points give
// +inf vacuously.
CriticalExponentResult desnowflake_exponent(const FiniteMetricSpace& space,
                                            double abs_tol = 1e-12,
                                            Exec exec = Exec::Parallel);

}  // namespace snowprobe
