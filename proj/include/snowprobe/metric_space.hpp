#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snowprobe/exec.hpp"

namespace snowprobe {

using PointId = std::int32_t;

class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  // Takes the matrix as given (row-major, n*n). Squareness is enforced here;
  // symmetry and the other axioms are validate_metric's job so that matrices
  // loaded from files can be diagnosed instead of rejected.
  FiniteMetricSpace(std::vector<double> matrix, std::size_t n,
                    std::vector<std::string> labels = {});

  // Builds from the upper triangle of pairwise distances; both triangles are
  // filled so the result is symmetric by construction.
  static FiniteMetricSpace from_pairwise(
      std::size_t n, const std::vector<double>& upper,
      std::vector<std::string> labels = {});

  std::size_t size() const { return n_; }
  double operator()(PointId i, PointId j) const {
    return m_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)];
  }
  const std::vector<double>& matrix() const { return m_; }
  const std::vector<std::string>& labels() const { return labels_; }

  double max_distance() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> m_;
  std::vector<std::string> labels_;
};

enum class ViolationKind {
  Asymmetry,
  Negative,
  ZeroOffDiagonal,
  NonzeroDiagonal,
  Triangle,
};

const char* violation_kind_name(ViolationKind kind);

struct ViolationReport {
  ViolationKind kind;
  // Pair-level kinds use (x, y) with z = -1; NonzeroDiagonal uses x only;
  // Triangle stores the base pair (x, y) and the through point z of the
  // worst-violating orientation.
  PointId x = -1;
  PointId y = -1;
  PointId z = -1;
  double defect = 0.0;
  bool warning = false;

  std::string describe() const;
};

struct ValidationOptions {
  double rel_tol = 1e-9;
  // Downgrades zero distance between distinct points to a warning.
  bool zero_off_diagonal_warning = false;
  Exec exec = Exec::Parallel;
};

// Reports every axiom violation, sorted by witness indices. Throws only for
// malformed input (NaN entries); a valid report list means every axiom holds
// with triangle defect d(x,y) - d(x,z) - d(z,y) <= rel_tol * d(x,y).
std::vector<ViolationReport> validate_metric(const FiniteMetricSpace& space,
                                             const ValidationOptions& opts = {});

// True when the list contains no non-warning entries.
bool is_valid_metric(const std::vector<ViolationReport>& reports);

// Entrywise d^p. p = 1 returns an identical copy; output is not revalidated.
FiniteMetricSpace power_transform(const FiniteMetricSpace& space, double p);

// Induced submatrix in the order given.
FiniteMetricSpace restrict_space(const FiniteMetricSpace& space,
                                 const std::vector<PointId>& subset);

}  // namespace snowprobe
