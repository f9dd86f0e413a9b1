#include "snowprobe/chains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "snowprobe/rng.hpp"

namespace snowprobe {

namespace {

const SpaceDescriptor* norm_core(const SpaceDescriptor& desc) {
  const SpaceDescriptor* cur = &desc;
  if (cur->kind == SpaceDescriptor::Kind::Snowflaked) cur = cur->base.get();
  if (cur->kind == SpaceDescriptor::Kind::Euclidean ||
      cur->kind == SpaceDescriptor::Kind::Normed)
    return cur;
  return nullptr;
}

bool is_euclidean_core(const SpaceDescriptor& desc) {
  const SpaceDescriptor* core = norm_core(desc);
  return core && (core->kind == SpaceDescriptor::Kind::Euclidean ||
                  core->norm_q == 2.0);
}

// Parameter t with z = a + t (b - a), or a quiet NaN when z is off the line
// by more than 1e-12 of the segment extent.
double segment_parameter(const Point& a, const Point& z, const Point& b) {
  double num = 0.0, den = 0.0, extent = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double u = b[i] - a[i];
    num += (z[i] - a[i]) * u;
    den += u * u;
    extent = std::max(extent, std::fabs(u));
  }
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  double t = num / den;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double off = z[i] - a[i] - t * (b[i] - a[i]);
    if (std::fabs(off) > 1e-12 * extent)
      return std::numeric_limits<double>::quiet_NaN();
  }
  return t;
}

}  // namespace

OracleViolation::OracleViolation(int depth, std::size_t segment,
                                 double residual, const char* what_happened)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "oracle violation at depth " << depth << ", segment "
            << segment << ": " << what_happened << " (relative residual "
            << residual << ")";
        return msg.str();
      }()),
      depth(depth), segment(segment), residual(residual) {}

SubdivisionOracle::SubdivisionOracle(const SpaceDescriptor& desc, Point a,
                                     Point z, Point b)
    : desc_(desc), a_(std::move(a)), z_(std::move(z)), b_(std::move(b)) {
  double dab = distance(desc_, a_, b_);
  double daz = distance(desc_, a_, z_);
  double dzb = distance(desc_, z_, b_);
  if (dab <= 0.0 || daz <= 0.0 || dzb <= 0.0)
    throw std::invalid_argument("SubdivisionOracle: base triple must have "
                                "three distinct points");
  r1_ = daz / dab;
  r2_ = dzb / dab;
}

SubdivisionOracle SubdivisionOracle::exact(const SpaceDescriptor& desc,
                                           Point a, Point z, Point b) {
  if (desc.is_shift())
    throw std::invalid_argument("SubdivisionOracle: no analytic placement "
                                "on sequence spaces");
  SubdivisionOracle o(desc, std::move(a), std::move(z), std::move(b));

  if (is_euclidean_core(desc)) {
    // Map (a,b) onto (x,y) by translate, reflect, scale; the image of z
    // then splits (x,y) in the same ratios, on or off the segment.
    Point base_a = o.a_, base_z = o.z_, base_b = o.b_;
    o.placer_ = [base_a, base_z, base_b](const Point& x, const Point& y) {
      const std::size_t dim = base_a.size();
      Point u(dim), v(dim), w(dim);
      double uu = 0.0, vv = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        u[i] = base_b[i] - base_a[i];
        v[i] = y[i] - x[i];
        w[i] = base_z[i] - base_a[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
      }
      double nu = std::sqrt(uu), nv = std::sqrt(vv);
      double s = nv / nu;
      Point r(dim);
      double rr = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        r[i] = u[i] / nu - v[i] / nv;
        rr += r[i] * r[i];
      }
      Point hw = w;
      if (rr > 1e-24) {
        double wr = 0.0;
        for (std::size_t i = 0; i < dim; ++i) wr += w[i] * r[i];
        double c = 2.0 * wr / rr;
        for (std::size_t i = 0; i < dim; ++i) hw[i] = w[i] - c * r[i];
      }
      Point out(dim);
      for (std::size_t i = 0; i < dim; ++i) out[i] = x[i] + s * hw[i];
      return out;
    };
    return o;
  }

  if (desc.kind == SpaceDescriptor::Kind::MixedProduct) {
    int active = -1;
    for (std::size_t i = 0; i < o.a_.size(); ++i) {
      if (o.b_[i] != o.a_[i]) {
        if (active >= 0)
          throw std::invalid_argument("SubdivisionOracle: mixed-product "
                                      "placement needs a single active axis");
        active = static_cast<int>(i);
      }
    }
  }

  double t = segment_parameter(o.a_, o.z_, o.b_);
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("SubdivisionOracle: z must lie strictly "
                                "inside the segment [a, b] for this "
                                "geometry");
  o.placer_ = [t](const Point& x, const Point& y) {
    Point out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      out[i] = x[i] + t * (y[i] - x[i]);
    return out;
  };
  return o;
}

SubdivisionOracle SubdivisionOracle::search(const SpaceDescriptor& desc,
                                            Point a, Point z, Point b,
                                            std::vector<Point> candidates) {
  if (candidates.empty())
    throw std::invalid_argument("SubdivisionOracle: empty candidate set");
  SubdivisionOracle o(desc, std::move(a), std::move(z), std::move(b));
  SpaceDescriptor space = o.desc_;
  double r1 = o.r1_, r2 = o.r2_;
  auto cands = std::make_shared<std::vector<Point>>(std::move(candidates));
  o.placer_ = [space, r1, r2, cands](const Point& x, const Point& y) {
    double dxy = distance(space, x, y);
    double best = std::numeric_limits<double>::infinity();
    const Point* pick = nullptr;
    for (const Point& c : *cands) {
      double res = std::max(std::fabs(distance(space, x, c) - r1 * dxy),
                            std::fabs(distance(space, c, y) - r2 * dxy));
      if (res < best) {
        best = res;
        pick = &c;
      }
    }
    return *pick;
  };
  return o;
}

SubdivisionOracle SubdivisionOracle::custom(const SpaceDescriptor& desc,
                                            Point a, Point z, Point b,
                                            Placer placer) {
  SubdivisionOracle o(desc, std::move(a), std::move(z), std::move(b));
  o.placer_ = std::move(placer);
  return o;
}

namespace {

// One interleaving round with the per-invocation equation check.
std::vector<Point> interleave(const SubdivisionOracle& oracle,
                              const std::vector<Point>& cur, int depth,
                              double check_tol) {
  const SpaceDescriptor& desc = oracle.space();
  std::vector<Point> next;
  next.reserve(2 * cur.size() - 1);
  for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
    next.push_back(cur[i]);
    Point mid = oracle.place(cur[i], cur[i + 1]);
    double dxy = distance(desc, cur[i], cur[i + 1]);
    double dxm = distance(desc, cur[i], mid);
    double dmy = distance(desc, mid, cur[i + 1]);
    double res = std::max(std::fabs(dxm - oracle.r1() * dxy),
                          std::fabs(dmy - oracle.r2() * dxy)) /
                 dxy;
    if (res > check_tol)
      throw OracleViolation(depth, i, res,
                            "placement misses the distance equations");
    if (dxm <= 0.0 || dmy <= 0.0)
      throw OracleViolation(depth, i, res,
                            "placement collides with a chain point");
    next.push_back(std::move(mid));
  }
  next.push_back(cur.back());
  return next;
}

}  // namespace

Chain refine_chain(const SubdivisionOracle& oracle, int depth,
                   double check_tol) {
  if (depth < 0 || depth > 20)
    throw std::invalid_argument("refine_chain: depth must be in [0, 20]");
  Chain chain{oracle.space(), {oracle.a(), oracle.z(), oracle.b()}};
  for (int k = 1; k <= depth; ++k)
    chain.points = interleave(oracle, chain.points, k, check_tol);
  return chain;
}

double p_length(const Chain& chain, double p) {
  if (!(p > 0.0)) throw std::domain_error("p_length: p must be positive");
  if (chain.points.size() < 2)
    throw std::invalid_argument("p_length: chain needs at least one segment");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < chain.points.size(); ++i) {
    double d = distance(chain.space, chain.points[i], chain.points[i + 1]);
    sum += p == 1.0 ? d : std::pow(d, p);
  }
  return sum;
}

double verify_recursion(const SubdivisionOracle& oracle, double p, int k_max,
                        double check_tol) {
  if (!(p > 0.0))
    throw std::domain_error("verify_recursion: p must be positive");
  if (k_max < 0 || k_max > 20)
    throw std::invalid_argument("verify_recursion: k_max must be in "
                                "[0, 20]");
  double dab = distance(oracle.space(), oracle.a(), oracle.b());
  if (std::fabs(dab - 1.0) > 1e-9)
    throw std::invalid_argument("verify_recursion: pre-scale the triple so "
                                "d(a,b) = 1");
  double daz = distance(oracle.space(), oracle.a(), oracle.z());
  double dzb = distance(oracle.space(), oracle.z(), oracle.b());
  double c = std::pow(daz, p) + std::pow(dzb, p);

  Chain chain{oracle.space(), {oracle.a(), oracle.z(), oracle.b()}};
  double worst = 0.0;
  for (int k = 0;; ++k) {
    double expected = std::pow(c, k + 1);
    double got = p_length(chain, p);
    worst = std::max(worst, std::fabs(got - expected) / expected);
    if (k == k_max) break;
    chain.points = interleave(oracle, chain.points, k + 1, check_tol);
  }
  return worst;
}

QuasiTriangleEstimate estimate_quasi_triangle(const FiniteMetricSpace& space,
                                              double p,
                                              std::size_t chain_budget,
                                              std::size_t max_len,
                                              std::uint64_t seed, Exec exec) {
  if (!(p > 0.0))
    throw std::domain_error("estimate_quasi_triangle: p must be positive");
  if (chain_budget == 0 || max_len == 0)
    throw std::invalid_argument("estimate_quasi_triangle: budget and "
                                "max_len must be positive");
  const std::size_t n = space.size();
  if (n < 2)
    throw std::invalid_argument("estimate_quasi_triangle: need at least two "
                                "points");

  // Chain i draws from its own stream so results do not depend on how the
  // chains are scheduled across threads.
  auto run_chain = [&](std::size_t i, std::vector<PointId>& pts) {
    SplitMix64 rng(seed + i);
    std::size_t segs = 1 + rng.next_below(max_len);
    pts.clear();
    pts.push_back(static_cast<PointId>(rng.next_below(n)));
    for (std::size_t s = 0; s < segs; ++s) {
      PointId next = -1;
      for (int tries = 0; tries < 100; ++tries) {
        PointId cand = static_cast<PointId>(rng.next_below(n));
        if (cand != pts.back() && space(pts.back(), cand) > 0.0) {
          next = cand;
          break;
        }
      }
      if (next < 0) return 0.0;  // everything coincides; chain is useless
      pts.push_back(next);
    }
    double denom = 0.0;
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
      double d = space(pts[s], pts[s + 1]);
      denom += p == 1.0 ? d : std::pow(d, p);
    }
    double ends = space(pts.front(), pts.back());
    double num = p == 1.0 ? ends : std::pow(ends, p);
    return num / denom;
  };

  QuasiTriangleEstimate out;
  out.p = p;
  out.chains_tested = chain_budget;
  double best = -1.0;
  std::size_t best_i = chain_budget;
  std::vector<PointId> best_pts;

  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      double t_best = -1.0;
      std::size_t t_i = chain_budget;
      std::vector<PointId> t_pts, scratch;
#pragma omp for schedule(dynamic, 64) nowait
      for (std::ptrdiff_t i = 0;
           i < static_cast<std::ptrdiff_t>(chain_budget); ++i) {
        double ratio = run_chain(static_cast<std::size_t>(i), scratch);
        if (ratio > t_best ||
            (ratio == t_best && static_cast<std::size_t>(i) < t_i)) {
          t_best = ratio;
          t_i = static_cast<std::size_t>(i);
          t_pts = scratch;
        }
      }
#pragma omp critical(snowprobe_quasi_merge)
      {
        if (t_best > best || (t_best == best && t_i < best_i)) {
          best = t_best;
          best_i = t_i;
          best_pts = std::move(t_pts);
        }
      }
    }
  } else {
    std::vector<PointId> scratch;
    for (std::size_t i = 0; i < chain_budget; ++i) {
      double ratio = run_chain(i, scratch);
      if (ratio > best) {
        best = ratio;
        best_i = i;
        best_pts = scratch;
      }
    }
  }

  out.l_hat = std::max(best, 0.0);
  out.witness = std::move(best_pts);
  return out;
}

}  // namespace snowprobe
