#include "snowprobe/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace snowprobe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Bracket cap for the root of a^p + b^p = 1; anything past it counts as
// never binding.
constexpr double kPCap = 1048576.0;

double solve_crit(double a, double b, double abs_tol, SolverTrace* trace) {
  std::int64_t iters = 0;
  double lo = 1.0;
  double hi = 2.0;
  while (true) {
    double g = std::pow(a, hi) + std::pow(b, hi) - 1.0;
    ++iters;
    if (g <= 0.0) break;
    if (hi >= kPCap) {
      if (trace) {
        trace->iterations = iters;
        trace->bracket_width = 0.0;
      }
      return kInf;
    }
    lo = hi;
    hi *= 2.0;
  }
  // g is strictly decreasing and convex on [lo, hi]; bisection with Newton
  // acceleration, falling back whenever the Newton step leaves the bracket.
  double p = 0.5 * (lo + hi);
  for (int k = 0; k < 200; ++k) {
    double ta = std::pow(a, p);
    double tb = std::pow(b, p);
    double g = ta + tb - 1.0;
    ++iters;
    if (std::fabs(g) <= abs_tol) break;
    if (g > 0.0)
      lo = p;
    else
      hi = p;
    double dg = ta * std::log(a) + tb * std::log(b);
    double q = dg != 0.0 ? p - g / dg
                         : std::numeric_limits<double>::quiet_NaN();
    p = (q > lo && q < hi) ? q : 0.5 * (lo + hi);
  }
  if (trace) {
    trace->iterations = iters;
    trace->bracket_width = hi - lo;
  }
  return p;
}

struct Oriented {
  PointId x, z, y;
  double a, b;
  double base;
};

// Largest side becomes the base pair; ties keep the smallest index tuple.
Oriented orient_triple(const FiniteMetricSpace& s, PointId i, PointId j,
                       PointId k) {
  double dij = s(i, j), dik = s(i, k), djk = s(j, k);
  Oriented o{i, k, j, dik, djk, dij};
  if (dik > o.base) o = Oriented{i, j, k, dij, djk, dik};
  if (djk > o.base) o = Oriented{j, i, k, dij, dik, djk};
  if (o.base > 0.0) {
    o.a /= o.base;
    o.b /= o.base;
  }
  return o;
}

struct BadTriple {
  PointId x = -1, z = -1, y = -1;
  double a = 0.0, b = 0.0;
  bool set() const { return x >= 0; }
  void offer(PointId x2, PointId z2, PointId y2, double a2, double b2) {
    if (set() && std::tie(x, z, y) <= std::tie(x2, z2, y2)) return;
    x = x2;
    z = z2;
    y = y2;
    a = a2;
    b = b2;
  }
};

struct Candidate {
  double p = kInf;
  PointId x = -1, z = -1, y = -1;
  double a = 0.0, b = 0.0;
  void offer(double p2, PointId x2, PointId z2, PointId y2, double a2,
             double b2) {
    if (std::tie(p, x, z, y) <= std::tie(p2, x2, z2, y2)) return;
    p = p2;
    x = x2;
    z = z2;
    y = y2;
    a = a2;
    b = b2;
  }
  void merge(const Candidate& o) {
    if (o.x >= 0) offer(o.p, o.x, o.z, o.y, o.a, o.b);
  }
};

}  // namespace

GaugeContext GaugeContext::make(const FiniteMetricSpace& base, PointId a,
                                PointId b) {
  const PointId n = static_cast<PointId>(base.size());
  if (a < 0 || b < 0 || a >= n || b >= n)
    throw std::invalid_argument("GaugeContext: point index out of range");
  if (a == b) throw std::invalid_argument("GaugeContext: a and b coincide");
  double dab = base(a, b);
  if (dab <= 0.0)
    throw std::invalid_argument("GaugeContext: pair distance must be "
                                "positive");
  std::vector<double> m(base.size() * base.size());
  for (PointId i = 0; i < n; ++i)
    for (PointId j = 0; j < n; ++j) m[i * base.size() + j] = base(i, j) / dab;
  GaugeContext ctx{FiniteMetricSpace(std::move(m), base.size(),
                                     base.labels()),
                   a, b};
  return ctx;
}

double gauge(const GaugeContext& ctx, double p) {
  if (p < 1.0) throw std::domain_error("gauge: p must be >= 1");
  const PointId n = static_cast<PointId>(ctx.space.size());
  double best = kInf;
  for (PointId x = 0; x < n; ++x) {
    double da = ctx.space(ctx.a, x);
    double db = ctx.space(x, ctx.b);
    double val = p == 1.0 ? da + db : std::pow(da, p) + std::pow(db, p);
    best = std::min(best, val);
  }
  return best;
}

std::vector<std::pair<double, double>> gauge_scan(const GaugeContext& ctx,
                                                  double p_min, double p_max,
                                                  int steps) {
  if (!(p_min >= 1.0) || !(p_min < p_max))
    throw std::invalid_argument("gauge_scan: need 1 <= p_min < p_max");
  if (steps < 2) throw std::invalid_argument("gauge_scan: need steps >= 2");
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    double p = i == steps - 1
                   ? p_max
                   : p_min + (p_max - p_min) * i / (steps - 1);
    out.emplace_back(p, gauge(ctx, p));
  }
  return out;
}

InvalidTripleError::InvalidTripleError(PointId x, PointId z, PointId y,
                                       double a, double b)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "triangle inequality already fails at p=1: legs " << a
            << " + " << b << " < 1";
        if (x >= 0) msg << " on triple (" << x << ", " << z << ", " << y
                        << ")";
        return msg.str();
      }()),
      x(x), z(z), y(y), a(a), b(b) {}

double triple_critical_exponent(double d_xy, double d_xz, double d_zy,
                                double abs_tol, SolverTrace* trace) {
  if (!(d_xy > 0.0) || !(d_xz > 0.0) || !(d_zy > 0.0))
    throw std::invalid_argument("triple_critical_exponent: distances must "
                                "be positive");
  if (d_xz > d_xy || d_zy > d_xy)
    throw std::invalid_argument("triple_critical_exponent: d_xy must be the "
                                "largest side");
  if (trace) *trace = SolverTrace{};
  double a = d_xz / d_xy;
  double b = d_zy / d_xy;
  if (a + b < 1.0 - abs_tol) throw InvalidTripleError(-1, -1, -1, a, b);
  if (std::max(a, b) >= 1.0 - abs_tol) return kInf;
  if (std::fabs(a + b - 1.0) <= abs_tol) return 1.0;
  return solve_crit(a, b, abs_tol, trace);
}

CriticalExponentResult desnowflake_exponent(const FiniteMetricSpace& space,
                                            double abs_tol, Exec exec) {
  const PointId n = static_cast<PointId>(space.size());
  CriticalExponentResult out;
  out.p_star = kInf;
  if (n < 3) return out;

  const double ln2 = std::log(2.0);
  const bool par = exec == Exec::Parallel;

  // Pass 1: a thread-order-free upper bound for p_star. Each triple with
  // max leg m < 1 satisfies a^u + b^u <= 2 m^u = 1 at u = ln2 / (-ln m),
  // so u bounds that triple's critical exponent from above.
  auto pass1_triple = [&](PointId i, PointId j, PointId k, double& ub,
                          BadTriple& bad) {
    Oriented o = orient_triple(space, i, j, k);
    if (o.base <= 0.0) return;
    if (o.a + o.b < 1.0 - abs_tol) {
      bad.offer(o.x, o.z, o.y, o.a, o.b);
      return;
    }
    double m = std::max(o.a, o.b);
    if (m >= 1.0 - abs_tol) return;
    double u = std::fabs(o.a + o.b - 1.0) <= abs_tol ? 1.0 : ln2 / -std::log(m);
    ub = std::min(ub, u);
  };

  double ub_min = kInf;
  BadTriple bad;
  if (par) {
#pragma omp parallel
    {
      double t_ub = kInf;
      BadTriple t_bad;
#pragma omp for schedule(dynamic, 4) nowait
      for (PointId i = 0; i < n; ++i)
        for (PointId j = i + 1; j < n; ++j)
          for (PointId k = j + 1; k < n; ++k)
            pass1_triple(i, j, k, t_ub, t_bad);
#pragma omp critical(snowprobe_desnowflake_pass1)
      {
        ub_min = std::min(ub_min, t_ub);
        if (t_bad.set()) bad.offer(t_bad.x, t_bad.z, t_bad.y, t_bad.a, t_bad.b);
      }
    }
  } else {
    for (PointId i = 0; i < n; ++i)
      for (PointId j = i + 1; j < n; ++j)
        for (PointId k = j + 1; k < n; ++k)
          pass1_triple(i, j, k, ub_min, bad);
  }
  if (bad.set()) throw InvalidTripleError(bad.x, bad.z, bad.y, bad.a, bad.b);

  // Pass 2: solve only triples that can still reach the bound. The prune
  // margin 10*abs_tol keeps the skip decision independent of solver fuzz,
  // so the result and witness do not depend on thread count.
  auto pass2_triple = [&](PointId i, PointId j, PointId k, Candidate& cand) {
    Oriented o = orient_triple(space, i, j, k);
    if (o.base <= 0.0) return;
    double m = std::max(o.a, o.b);
    if (m >= 1.0 - abs_tol) return;
    double p;
    if (std::fabs(o.a + o.b - 1.0) <= abs_tol) {
      p = 1.0;
    } else {
      if (std::pow(o.a, ub_min) + std::pow(o.b, ub_min) > 1.0 + 10.0 * abs_tol)
        return;
      p = solve_crit(o.a, o.b, abs_tol, nullptr);
      if (std::isinf(p)) return;
    }
    cand.offer(p, o.x, o.z, o.y, o.a, o.b);
  };

  Candidate cand;
  if (par) {
#pragma omp parallel
    {
      Candidate t_cand;
#pragma omp for schedule(dynamic, 4) nowait
      for (PointId i = 0; i < n; ++i)
        for (PointId j = i + 1; j < n; ++j)
          for (PointId k = j + 1; k < n; ++k)
            pass2_triple(i, j, k, t_cand);
#pragma omp critical(snowprobe_desnowflake_pass2)
      cand.merge(t_cand);
    }
  } else {
    for (PointId i = 0; i < n; ++i)
      for (PointId j = i + 1; j < n; ++j)
        for (PointId k = j + 1; k < n; ++k)
          pass2_triple(i, j, k, cand);
  }

  if (cand.x < 0) return out;
  out.p_star = cand.p;
  TripleExponent w;
  w.x = cand.x;
  w.z = cand.z;
  w.y = cand.y;
  w.a = cand.a;
  w.b = cand.b;
  w.p_crit = cand.p;
  out.witness = w;
  if (std::fabs(cand.a + cand.b - 1.0) > abs_tol)
    solve_crit(cand.a, cand.b, abs_tol, &out.trace);
  return out;
}

}  // namespace snowprobe
