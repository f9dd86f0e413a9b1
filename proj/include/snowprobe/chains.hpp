#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "snowprobe/descriptors.hpp"
#include "snowprobe/exec.hpp"
#include "snowprobe/metric_space.hpp"

namespace snowprobe {

class OracleViolation : public std::runtime_error {
 public:
  OracleViolation(int depth, std::size_t segment, double residual,
                  const char* what_happened);
  int depth;            // refinement level being built
  std::size_t segment;  // index of the pair the oracle was asked to split
  double residual;      // worst relative deviation from the two equations
};

// Placement rule derived from a base triple (a, z, b): for any pair (x, y)
// it returns z' with d(x,z') = r1 d(x,y) and d(z',y) = r2 d(x,y), where
// r1 = d(a,z)/d(a,b) and r2 = d(z,b)/d(a,b). Every invocation is checked
// against those equations by the callers.
class SubdivisionOracle {
 public:
  using Placer = std::function<Point(const Point&, const Point&)>;

  // Analytic placement. Euclidean-like geometries (euclidean or 2-norm,
  // snowflaked or not) accept any z via a reflect-and-scale similarity;
  // other norms and single-axis mixed products need z on the segment [a,b].
  static SubdivisionOracle exact(const SpaceDescriptor& desc, Point a,
                                 Point z, Point b);
  // Picks the candidate minimizing the worse of the two equation residuals;
  // ties keep the earliest candidate.
  static SubdivisionOracle search(const SpaceDescriptor& desc, Point a,
                                  Point z, Point b,
                                  std::vector<Point> candidates);
  static SubdivisionOracle custom(const SpaceDescriptor& desc, Point a,
                                  Point z, Point b, Placer placer);

  const SpaceDescriptor& space() const { return desc_; }
  const Point& a() const { return a_; }
  const Point& z() const { return z_; }
  const Point& b() const { return b_; }
  double r1() const { return r1_; }
  double r2() const { return r2_; }
  Point place(const Point& x, const Point& y) const { return placer_(x, y); }

 private:
  SubdivisionOracle(const SpaceDescriptor& desc, Point a, Point z, Point b);
  SpaceDescriptor desc_;
  Point a_, z_, b_;
  double r1_ = 0.0, r2_ = 0.0;
  Placer placer_;
};

struct Chain {
  SpaceDescriptor space;
  std::vector<Point> points;  // consecutive points distinct
};

// Depth-k refinement of (a, z, b): k interleaving rounds, so 2^(k+1)
// segments. Any placement off the oracle equations by more than check_tol
// (relative to the segment being split) aborts with the offending step.
Chain refine_chain(const SubdivisionOracle& oracle, int depth,
                   double check_tol = 1e-10);

// Sum of segment distances raised to p.
double p_length(const Chain& chain, double p);

// Largest relative deviation of p_length at depths 0..k_max from c^(k+1)
// with c = d(a,z)^p + d(z,b)^p; requires d(a,b) = 1, which makes that the
// closed form for the refinement.
double verify_recursion(const SubdivisionOracle& oracle, double p, int k_max,
                        double check_tol = 1e-10);

struct QuasiTriangleEstimate {
  double p = 1.0;
  double l_hat = 0.0;  // max of d(ends)^p / sum of segment d^p
  std::vector<PointId> witness;
  std::size_t chains_tested = 0;
};

// Seeded random chains through the finite space; a lower bound for the best
// constant L in d(x_0,x_m)^p <= L * sum d(x_i,x_{i-1})^p.
QuasiTriangleEstimate estimate_quasi_triangle(const FiniteMetricSpace& space,
                                              double p,
                                              std::size_t chain_budget,
                                              std::size_t max_len,
                                              std::uint64_t seed,
                                              Exec exec = Exec::Parallel);

}  // namespace snowprobe
