#include "snowprobe/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "snowprobe/rng.hpp"

namespace snowprobe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Farthest remaining point from the current net; lowest index wins ties so
// the sweep is reproducible across thread counts.
std::pair<PointId, double> argmax_lowest(const std::vector<double>& dist,
                                         Exec exec) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dist.size());
  PointId best_i = -1;
  double best_d = -kInf;
  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      PointId t_i = -1;
      double t_d = -kInf;
#pragma omp for schedule(static) nowait
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        if (dist[i] > t_d) {
          t_d = dist[i];
          t_i = static_cast<PointId>(i);
        }
      }
#pragma omp critical(snowprobe_fpt_argmax)
      {
        if (t_d > best_d || (t_d == best_d && t_i >= 0 && t_i < best_i)) {
          best_d = t_d;
          best_i = t_i;
        }
      }
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (dist[i] > best_d) {
        best_d = dist[i];
        best_i = static_cast<PointId>(i);
      }
    }
  }
  return {best_i, best_d};
}

}  // namespace

FarthestPointOrdering farthest_point_ordering(const FiniteMetricSpace& space,
                                              Exec exec) {
  const PointId n = static_cast<PointId>(space.size());
  FarthestPointOrdering out;
  if (n == 0) return out;
  out.order.reserve(space.size());
  out.insertion_distance.reserve(space.size());
  out.order.push_back(0);
  out.insertion_distance.push_back(kInf);

  std::vector<double> dist(space.size());
  for (PointId i = 0; i < n; ++i) dist[i] = space(0, i);
  dist[0] = -kInf;  // inserted points never win again

  for (PointId step = 1; step < n; ++step) {
    auto [pick, d] = argmax_lowest(dist, exec);
    out.order.push_back(pick);
    out.insertion_distance.push_back(d);
    dist[pick] = -kInf;
    for (PointId i = 0; i < n; ++i) {
      if (dist[i] == -kInf) continue;
      dist[i] = std::min(dist[i], space(pick, i));
    }
  }
  return out;
}

DimensionEstimate box_dimension(const FiniteMetricSpace& space,
                                const std::vector<double>& scales,
                                Exec exec) {
  if (space.size() == 0)
    throw std::invalid_argument("box_dimension: empty space");
  if (scales.size() < 3)
    throw std::invalid_argument("box_dimension: need at least 3 scales");
  double lo = kInf, hi = 0.0;
  for (double r : scales) {
    if (!(r > 0.0))
      throw std::invalid_argument("box_dimension: scales must be positive");
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (hi < 10.0 * lo)
    throw std::invalid_argument("box_dimension: scales must span at least "
                                "one decade");

  const FarthestPointOrdering fpt = farthest_point_ordering(space, exec);

  DimensionEstimate est;
  est.records.reserve(scales.size());
  for (double r : scales) {
    std::size_t count = 0;
    for (double d : fpt.insertion_distance)
      if (d > r) ++count;
    est.records.push_back({r, count});
  }

  const std::size_t m = est.records.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    xs[i] = -std::log(est.records[i].scale);
    ys[i] = std::log(static_cast<double>(est.records[i].count));
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("box_dimension: degenerate scale set");
  est.slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double fit = my + est.slope * (xs[i] - mx);
    ss += (ys[i] - fit) * (ys[i] - fit);
  }
  est.residual = std::sqrt(ss / m);
  return est;
}

std::vector<double> default_box_scales(const FiniteMetricSpace& space) {
  double diam = space.max_distance();
  if (!(diam > 0.0))
    throw std::invalid_argument("default_box_scales: zero-diameter space");
  std::vector<double> scales;
  for (int k = 0; k < 8; ++k)
    scales.push_back(diam / 64.0 * std::pow(16.0, k / 7.0));
  return scales;
}

DoublingEstimate doubling_constant(const FiniteMetricSpace& space,
                                   const std::vector<double>& radii,
                                   std::size_t center_budget,
                                   std::uint64_t seed, Exec exec) {
  if (radii.empty())
    throw std::invalid_argument("doubling_constant: no radii given");
  for (double r : radii)
    if (!(r > 0.0))
      throw std::invalid_argument("doubling_constant: radii must be "
                                  "positive");
  if (center_budget == 0)
    throw std::invalid_argument("doubling_constant: center budget must be "
                                "positive");
  const PointId n = static_cast<PointId>(space.size());
  if (n == 0) throw std::invalid_argument("doubling_constant: empty space");

  std::vector<PointId> centers;
  if (space.size() <= center_budget) {
    for (PointId i = 0; i < n; ++i) centers.push_back(i);
  } else {
    SplitMix64 rng(seed);
    std::set<PointId> chosen;
    std::size_t draws = 0;
    while (chosen.size() < center_budget &&
           draws < 100 * center_budget + 1000) {
      ++draws;
      chosen.insert(static_cast<PointId>(rng.next_below(space.size())));
    }
    centers.assign(chosen.begin(), chosen.end());
  }

  // Greedy half-radius net of the ball around one center, seeded at the
  // center itself.
  auto cover_size = [&](PointId c, double r) {
    std::vector<PointId> ball;
    for (PointId z = 0; z < n; ++z)
      if (space(c, z) <= r) ball.push_back(z);
    std::vector<double> dist(ball.size());
    for (std::size_t i = 0; i < ball.size(); ++i)
      dist[i] = space(c, ball[i]);
    std::size_t picked = 1;
    while (true) {
      double worst = -1.0;
      std::size_t worst_i = ball.size();
      for (std::size_t i = 0; i < ball.size(); ++i) {
        if (dist[i] > worst) {
          worst = dist[i];
          worst_i = i;
        }
      }
      if (worst <= r / 2.0) break;
      ++picked;
      PointId add = ball[worst_i];
      for (std::size_t i = 0; i < ball.size(); ++i)
        dist[i] = std::min(dist[i], space(add, ball[i]));
    }
    return picked;
  };

  DoublingEstimate out;
  out.radii = radii;
  out.centers_tested = centers.size();
  const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(centers.size());
  std::size_t c_hat = 0;
  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      std::size_t local = 0;
#pragma omp for schedule(dynamic, 1) nowait
      for (std::ptrdiff_t i = 0; i < nc; ++i)
        for (double r : radii)
          local = std::max(local, cover_size(centers[i], r));
#pragma omp critical(snowprobe_doubling_max)
      c_hat = std::max(c_hat, local);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < nc; ++i)
      for (double r : radii) c_hat = std::max(c_hat, cover_size(centers[i], r));
  }
  out.c_hat = c_hat;
  return out;
}

std::vector<SphereGap> sphere_surjectivity(const FiniteMetricSpace& space,
                                           PointId x0,
                                           const std::vector<double>& radii,
                                           double gap_tol) {
  const PointId n = static_cast<PointId>(space.size());
  if (x0 < 0 || x0 >= n)
    throw std::invalid_argument("sphere_surjectivity: center out of range");
  double max_d = 0.0;
  for (PointId z = 0; z < n; ++z) max_d = std::max(max_d, space(x0, z));
  std::vector<SphereGap> out;
  out.reserve(radii.size());
  for (double r : radii) {
    if (!(r >= 0.0) || r > max_d)
      throw std::invalid_argument("sphere_surjectivity: radius outside "
                                  "[0, max distance from center]");
    double gap = kInf;
    for (PointId z = 0; z < n; ++z)
      gap = std::min(gap, std::fabs(space(x0, z) - r));
    out.push_back({r, gap, gap <= gap_tol});
  }
  return out;
}

}  // namespace snowprobe
