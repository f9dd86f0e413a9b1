#include "snowprobe/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <tuple>

namespace snowprobe {

namespace {

double split_point(double s, double u, double delta) {
  return s + delta * (u - s);
}

void check_delta(double delta, const char* who) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::domain_error(std::string(who) + ": delta must be in (0, 1)");
}

}  // namespace

DyadicSchedule build_schedule(double delta, int n) {
  check_delta(delta, "build_schedule");
  if (n < 0 || n > 20)
    throw std::invalid_argument("build_schedule: depth must be in [0, 20]");
  DyadicSchedule sched;
  sched.delta = delta;
  sched.depth = n;
  sched.endpoints = {0.0, 1.0};
  for (int level = 0; level < n; ++level) {
    std::vector<double> next;
    next.reserve(2 * sched.endpoints.size() - 1);
    for (std::size_t i = 0; i + 1 < sched.endpoints.size(); ++i) {
      double s = sched.endpoints[i];
      double u = sched.endpoints[i + 1];
      double mid = split_point(s, u, delta);
      if (!(mid > s && mid < u))
        throw std::invalid_argument("build_schedule: interval too small to "
                                    "split at this depth");
      next.push_back(s);
      next.push_back(mid);
    }
    next.push_back(sched.endpoints.back());
    sched.endpoints = std::move(next);
  }
  return sched;
}

GeodesicConstructionError::GeodesicConstructionError(double s, double u,
                                                     double residual)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "between-oracle violation while splitting [" << s << ", " << u
            << "]: relative residual " << residual;
        return msg.str();
      }()),
      s(s), u(u), residual(residual) {}

BetweenOracle::BetweenOracle(const SpaceDescriptor& desc, double delta)
    : desc_(desc), delta_(delta) {
  check_delta(delta, "BetweenOracle");
}

BetweenOracle BetweenOracle::linear(const SpaceDescriptor& desc,
                                    double delta) {
  if (desc.is_shift())
    throw std::invalid_argument("BetweenOracle: no linear interpolation on "
                                "sequence spaces");
  BetweenOracle o(desc, delta);
  o.placer_ = [delta](const Point& x, const Point& y) {
    Point out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      out[i] = x[i] + delta * (y[i] - x[i]);
    return out;
  };
  return o;
}

BetweenOracle BetweenOracle::search(const SpaceDescriptor& desc, double delta,
                                    std::vector<Point> candidates) {
  if (candidates.empty())
    throw std::invalid_argument("BetweenOracle: empty candidate set");
  BetweenOracle o(desc, delta);
  SpaceDescriptor space = desc;
  auto cands = std::make_shared<std::vector<Point>>(std::move(candidates));
  o.placer_ = [space, delta, cands](const Point& x, const Point& y) {
    double dxy = distance(space, x, y);
    double best = std::numeric_limits<double>::infinity();
    const Point* pick = nullptr;
    for (const Point& c : *cands) {
      double res =
          std::max(std::fabs(distance(space, x, c) - delta * dxy),
                   std::fabs(distance(space, c, y) - (1.0 - delta) * dxy));
      if (res < best) {
        best = res;
        pick = &c;
      }
    }
    return *pick;
  };
  return o;
}

BetweenOracle BetweenOracle::custom(const SpaceDescriptor& desc, double delta,
                                    Placer placer) {
  BetweenOracle o(desc, delta);
  o.placer_ = std::move(placer);
  return o;
}

GeodesicApprox construct_geodesic(const BetweenOracle& oracle, const Point& x,
                                  const Point& y, double delta, int n,
                                  double check_tol) {
  if (delta != oracle.delta())
    throw std::invalid_argument("construct_geodesic: delta must match the "
                                "oracle");
  if (n < 0 || n > 20)
    throw std::invalid_argument("construct_geodesic: depth must be in "
                                "[0, 20]");
  const SpaceDescriptor& desc = oracle.space();
  double dxy = distance(desc, x, y);
  if (dxy <= 0.0)
    throw std::invalid_argument("construct_geodesic: endpoints coincide");

  GeodesicApprox g;
  g.space = desc;
  g.base_distance = dxy;
  std::vector<double> ts = {0.0, 1.0};
  std::vector<Point> pts = {x, y};
  for (int level = 0; level < n; ++level) {
    std::vector<double> ts_next;
    std::vector<Point> pts_next;
    ts_next.reserve(2 * ts.size() - 1);
    pts_next.reserve(2 * ts.size() - 1);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      double s = ts[i], u = ts[i + 1];
      double mid_t = split_point(s, u, delta);
      Point mid = oracle.place(pts[i], pts[i + 1]);
      double d = distance(desc, pts[i], pts[i + 1]);
      if (d <= 0.0) throw GeodesicConstructionError(s, u, 1.0);
      double res =
          std::max(std::fabs(distance(desc, pts[i], mid) - delta * d),
                   std::fabs(distance(desc, mid, pts[i + 1]) -
                             (1.0 - delta) * d)) /
          d;
      if (res > check_tol) throw GeodesicConstructionError(s, u, res);
      ts_next.push_back(s);
      ts_next.push_back(mid_t);
      pts_next.push_back(std::move(pts[i]));
      pts_next.push_back(std::move(mid));
    }
    ts_next.push_back(ts.back());
    pts_next.push_back(std::move(pts.back()));
    ts = std::move(ts_next);
    pts = std::move(pts_next);
  }
  g.schedule.delta = delta;
  g.schedule.depth = n;
  g.schedule.endpoints = std::move(ts);
  g.points = std::move(pts);
  return g;
}

IsometryDeviation isometry_defect(const GeodesicApprox& g, Exec exec) {
  if (g.schedule.depth > 12)
    throw std::length_error("isometry_defect: depth above 12 is quadratic "
                            "blowup; subsample the schedule first");
  if (g.points.size() != g.schedule.endpoints.size() || g.points.size() < 2)
    throw std::invalid_argument("isometry_defect: malformed approximation");
  const double base = g.base_distance;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(g.points.size());

  IsometryDeviation out;
  std::ptrdiff_t best_i = n, best_j = n;

  auto scan_row = [&](std::ptrdiff_t i, double& defect, std::ptrdiff_t& bi,
                      std::ptrdiff_t& bj) {
    for (std::ptrdiff_t j = i + 1; j < n; ++j) {
      double want = (g.schedule.endpoints[j] - g.schedule.endpoints[i]) * base;
      double got = distance(g.space, g.points[i], g.points[j]);
      double dev = std::fabs(got - want) / base;
      if (dev > defect ||
          (dev == defect && std::tie(i, j) < std::tie(bi, bj))) {
        defect = dev;
        bi = i;
        bj = j;
      }
    }
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      double t_defect = -1.0;
      std::ptrdiff_t t_i = n, t_j = n;
#pragma omp for schedule(dynamic, 8) nowait
      for (std::ptrdiff_t i = 0; i < n; ++i)
        scan_row(i, t_defect, t_i, t_j);
#pragma omp critical(snowprobe_isometry_merge)
      {
        if (t_defect > out.max_defect ||
            (t_defect == out.max_defect &&
             std::tie(t_i, t_j) < std::tie(best_i, best_j))) {
          out.max_defect = t_defect;
          best_i = t_i;
          best_j = t_j;
        }
      }
    }
  } else {
    double defect = -1.0;
    for (std::ptrdiff_t i = 0; i < n; ++i)
      scan_row(i, defect, best_i, best_j);
    out.max_defect = defect;
  }

  if (best_i < n) {
    out.s = g.schedule.endpoints[static_cast<std::size_t>(best_i)];
    out.t = g.schedule.endpoints[static_cast<std::size_t>(best_j)];
  }
  out.max_defect = std::max(out.max_defect, 0.0);
  return out;
}

}  // namespace snowprobe
