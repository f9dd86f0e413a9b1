#include "snowprobe/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace snowprobe {

FiniteMetricSpace::FiniteMetricSpace(std::vector<double> matrix, std::size_t n,
                                     std::vector<std::string> labels)
    : n_(n), m_(std::move(matrix)), labels_(std::move(labels)) {
  if (m_.size() != n_ * n_) {
    throw std::invalid_argument("matrix is not square with the stated size");
  }
  if (!labels_.empty()) {
    if (labels_.size() != n_) {
      throw std::invalid_argument("label count does not match point count");
    }
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != n_) {
      throw std::invalid_argument("labels are not unique");
    }
  }
}

FiniteMetricSpace FiniteMetricSpace::from_pairwise(
    std::size_t n, const std::vector<double>& upper,
    std::vector<std::string> labels) {
  if (upper.size() != n * (n - 1) / 2) {
    throw std::invalid_argument("upper triangle has wrong length");
  }
  std::vector<double> m(n * n, 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m[i * n + j] = upper[k];
      m[j * n + i] = upper[k];
      ++k;
    }
  }
  return FiniteMetricSpace(std::move(m), n, std::move(labels));
}

double FiniteMetricSpace::max_distance() const {
  double mx = 0.0;
  for (double v : m_) mx = std::max(mx, v);
  return mx;
}

const char* violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Asymmetry: return "asymmetry";
    case ViolationKind::Negative: return "negative";
    case ViolationKind::ZeroOffDiagonal: return "zero-off-diagonal";
    case ViolationKind::NonzeroDiagonal: return "nonzero-diagonal";
    case ViolationKind::Triangle: return "triangle";
  }
  return "?";
}

std::string ViolationReport::describe() const {
  std::ostringstream os;
  os << violation_kind_name(kind) << " at (" << x;
  if (y >= 0) os << "," << y;
  if (z >= 0) os << ";" << z;
  os << ") defect " << defect;
  if (warning) os << " [warning]";
  return os.str();
}

namespace {

bool report_before(const ViolationReport& a, const ViolationReport& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  if (a.z != b.z) return a.z < b.z;
  return static_cast<int>(a.kind) < static_cast<int>(b.kind);
}

// Worst orientation of the triangle inequality within one unordered triple.
// Only the orientation whose base is the largest side can have positive
// defect, but all three are checked so tolerance scaling stays explicit.
bool triangle_violation(const FiniteMetricSpace& d, double rel_tol, PointId i,
                        PointId j, PointId k, ViolationReport* out) {
  const double dij = d(i, j), dik = d(i, k), djk = d(j, k);
  struct Orient {
    double base, margin;
    PointId x, y, z;
  };
  const Orient orients[3] = {
      {dij, dij - dik - djk, i, j, k},
      {dik, dik - dij - djk, i, k, j},
      {djk, djk - dij - dik, j, k, i},
  };
  const Orient* worst = nullptr;
  for (const Orient& o : orients) {
    if (o.margin > rel_tol * o.base && (!worst || o.margin > worst->margin)) {
      worst = &o;
    }
  }
  if (!worst) return false;
  *out = {ViolationKind::Triangle, worst->x, worst->y, worst->z, worst->margin,
          false};
  return true;
}

}  // namespace

std::vector<ViolationReport> validate_metric(const FiniteMetricSpace& space,
                                             const ValidationOptions& opts) {
  if (opts.rel_tol < 0) throw std::invalid_argument("rel_tol must be >= 0");
  const std::size_t n = space.size();
  for (double v : space.matrix()) {
    if (std::isnan(v)) throw std::invalid_argument("matrix contains NaN");
  }

  std::vector<ViolationReport> reports;

  for (std::size_t i = 0; i < n; ++i) {
    const double dii = space(static_cast<PointId>(i), static_cast<PointId>(i));
    if (dii != 0.0) {
      reports.push_back({ViolationKind::NonzeroDiagonal,
                         static_cast<PointId>(i), -1, -1, std::fabs(dii),
                         false});
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const PointId pi = static_cast<PointId>(i), pj = static_cast<PointId>(j);
      const double dij = space(pi, pj), dji = space(pj, pi);
      const double gap = std::fabs(dij - dji);
      if (gap > opts.rel_tol * std::max(std::fabs(dij), std::fabs(dji))) {
        reports.push_back({ViolationKind::Asymmetry, pi, pj, -1, gap, false});
      }
      const double lo = std::min(dij, dji);
      if (lo < 0.0) {
        reports.push_back({ViolationKind::Negative, pi, pj, -1, -lo, false});
      } else if (dij == 0.0 || dji == 0.0) {
        reports.push_back({ViolationKind::ZeroOffDiagonal, pi, pj, -1, 1.0,
                           opts.zero_off_diagonal_warning});
      }
    }
  }

  if (n >= 3) {
    if (opts.exec == Exec::Parallel) {
      const int nt = std::max(1, thread_count());
      std::vector<std::vector<ViolationReport>> local(
          static_cast<std::size_t>(nt));
#pragma omp parallel for schedule(dynamic, 4) num_threads(nt)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n) - 2; ++i) {
#ifdef _OPENMP
        auto& mine = local[static_cast<std::size_t>(omp_get_thread_num())];
#else
        auto& mine = local[0];
#endif
        ViolationReport rep;
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
          for (std::size_t k = j + 1; k < n; ++k) {
            if (triangle_violation(space, opts.rel_tol,
                                   static_cast<PointId>(i),
                                   static_cast<PointId>(j),
                                   static_cast<PointId>(k), &rep)) {
              mine.push_back(rep);
            }
          }
        }
      }
      for (auto& chunk : local) {
        reports.insert(reports.end(), chunk.begin(), chunk.end());
      }
    } else {
      ViolationReport rep;
      for (std::size_t i = 0; i + 2 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          for (std::size_t k = j + 1; k < n; ++k) {
            if (triangle_violation(space, opts.rel_tol,
                                   static_cast<PointId>(i),
                                   static_cast<PointId>(j),
                                   static_cast<PointId>(k), &rep)) {
              reports.push_back(rep);
            }
          }
        }
      }
    }
  }

  std::sort(reports.begin(), reports.end(), report_before);
  return reports;
}

bool is_valid_metric(const std::vector<ViolationReport>& reports) {
  return std::none_of(reports.begin(), reports.end(),
                      [](const ViolationReport& r) { return !r.warning; });
}

FiniteMetricSpace power_transform(const FiniteMetricSpace& space, double p) {
  if (!(p > 0.0)) throw std::domain_error("power transform needs p > 0");
  std::vector<double> m = space.matrix();
  if (p != 1.0) {
    for (double& v : m) v = std::pow(v, p);
  }
  return FiniteMetricSpace(std::move(m), space.size(), space.labels());
}

FiniteMetricSpace restrict_space(const FiniteMetricSpace& space,
                                 const std::vector<PointId>& subset) {
  const std::size_t n = space.size();
  std::set<PointId> seen;
  for (PointId id : subset) {
    if (id < 0 || static_cast<std::size_t>(id) >= n) {
      throw std::invalid_argument("subset index out of range");
    }
    if (!seen.insert(id).second) {
      throw std::invalid_argument("subset indices must be distinct");
    }
  }
  const std::size_t m = subset.size();
  std::vector<double> out(m * m);
  std::vector<std::string> labels;
  const bool has_labels = !space.labels().empty();
  if (has_labels) labels.reserve(m);
  for (std::size_t a = 0; a < m; ++a) {
    if (has_labels) labels.push_back(space.labels()[static_cast<std::size_t>(subset[a])]);
    for (std::size_t b = 0; b < m; ++b) {
      out[a * m + b] = space(subset[a], subset[b]);
    }
  }
  return FiniteMetricSpace(std::move(out), m, std::move(labels));
}

}  // namespace snowprobe
