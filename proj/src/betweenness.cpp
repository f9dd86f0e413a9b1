#include "snowprobe/betweenness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "snowprobe/rng.hpp"

namespace snowprobe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_pair(const FiniteMetricSpace& space, PointId x, PointId y,
                const char* who) {
  const PointId n = static_cast<PointId>(space.size());
  if (x < 0 || y < 0 || x >= n || y >= n)
    throw std::invalid_argument(std::string(who) + ": index out of range");
  if (x == y)
    throw std::invalid_argument(std::string(who) + ": x and y coincide");
}

bool cert_before(const BetweennessCertificate& l,
                 const BetweennessCertificate& r) {
  return std::tie(l.defect, l.x, l.z, l.y) <
         std::tie(r.defect, r.x, r.z, r.y);
}

}  // namespace

std::vector<BetweennessCertificate> find_between_points(
    const FiniteMetricSpace& space, double rel_tol, Exec exec) {
  const PointId n = static_cast<PointId>(space.size());
  std::vector<BetweennessCertificate> out;
  if (n < 3) return out;

  auto scan_pair = [&](PointId x, PointId y,
                       std::vector<BetweennessCertificate>& sink) {
    double d = space(x, y);
    if (d <= 0.0) return;
    double bound = rel_tol * d;
    for (PointId z = 0; z < n; ++z) {
      if (z == x || z == y) continue;
      double defect = space(x, z) + space(z, y) - d;
      if (defect <= bound) sink.push_back({x, z, y, defect});
    }
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      std::vector<BetweennessCertificate> local;
#pragma omp for schedule(dynamic, 4) nowait
      for (PointId x = 0; x < n; ++x)
        for (PointId y = x + 1; y < n; ++y) scan_pair(x, y, local);
#pragma omp critical(snowprobe_between_merge)
      out.insert(out.end(), local.begin(), local.end());
    }
  } else {
    for (PointId x = 0; x < n; ++x)
      for (PointId y = x + 1; y < n; ++y) scan_pair(x, y, out);
  }
  std::sort(out.begin(), out.end(), cert_before);
  return out;
}

std::vector<PointId> lens_members(const FiniteMetricSpace& space,
                                  const LensQuery& q) {
  check_pair(space, q.x, q.y, "lens_members");
  if (!(q.lambda > 0.0) || !(q.lambda < 1.0))
    throw std::invalid_argument("lens_members: lambda must be in (0, 1)");
  if (!(q.delta > 0.0))
    throw std::invalid_argument("lens_members: delta must be positive");
  const double d = space(q.x, q.y);
  if (d <= 0.0)
    throw std::invalid_argument("lens_members: pair distance must be "
                                "positive");
  const double r1 = (q.lambda + q.delta) * d;
  const double r2 = (1.0 - q.lambda + q.delta) * d;
  std::vector<PointId> out;
  const PointId n = static_cast<PointId>(space.size());
  for (PointId z = 0; z < n; ++z)
    if (space(q.x, z) <= r1 && space(z, q.y) <= r2) out.push_back(z);
  return out;
}

double midpoint_defect(const FiniteMetricSpace& space, PointId x, PointId y) {
  check_pair(space, x, y, "midpoint_defect");
  const PointId n = static_cast<PointId>(space.size());
  if (n < 3) return kInf;
  const double d = space(x, y);
  if (d <= 0.0)
    throw std::invalid_argument("midpoint_defect: pair distance must be "
                                "positive");
  double best = kInf;
  for (PointId z = 0; z < n; ++z) {
    if (z == x || z == y) continue;
    best = std::min(best, std::max(space(x, z), space(z, y)) / d);
  }
  return best - 0.5;
}

std::vector<double> default_delta_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 49; ++i) g.push_back(i / 100.0);
  return g;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 99; ++i) g.push_back(i / 100.0);
  return g;
}

namespace {

struct PairScan {
  bool has_empty = false;
  double lambda = 0.0;
};

// Per-point lambda coverage on the grid comes from two monotone binary
// searches using the same comparisons lens_members makes, so the scan is
// bit-for-bit equivalent to testing every (lambda, z) pair directly.
PairScan scan_pair_lenses(const FiniteMetricSpace& space, PointId x,
                          PointId y, const std::vector<double>& lams,
                          double delta) {
  const int m = static_cast<int>(lams.size());
  const double d = space(x, y);
  std::vector<int> cover(static_cast<std::size_t>(m) + 1, 0);
  const PointId n = static_cast<PointId>(space.size());
  for (PointId z = 0; z < n; ++z) {
    const double dxz = space(x, z);
    const double dzy = space(z, y);
    int lo = 0, hi = m;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (dxz <= (lams[mid] + delta) * d)
        hi = mid;
      else
        lo = mid + 1;
    }
    const int first = lo;
    lo = 0;
    hi = m;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (dzy <= (1.0 - lams[mid] + delta) * d)
        lo = mid + 1;
      else
        hi = mid;
    }
    const int last = lo - 1;
    if (first <= last) {
      ++cover[first];
      --cover[last + 1];
    }
  }
  int running = 0;
  for (int t = 0; t < m; ++t) {
    running += cover[t];
    if (running == 0) return {true, lams[t]};
  }
  return {false, 0.0};
}

std::vector<std::pair<PointId, PointId>> pick_pairs(
    const FiniteMetricSpace& space, std::size_t pair_budget,
    std::uint64_t seed) {
  const PointId n = static_cast<PointId>(space.size());
  std::vector<std::pair<PointId, PointId>> pairs;
  const std::size_t total =
      static_cast<std::size_t>(n) * (static_cast<std::size_t>(n) - 1) / 2;
  if (total <= pair_budget) {
    for (PointId x = 0; x < n; ++x)
      for (PointId y = x + 1; y < n; ++y)
        if (space(x, y) > 0.0) pairs.emplace_back(x, y);
    return pairs;
  }
  SplitMix64 rng(seed);
  std::set<std::pair<PointId, PointId>> chosen;
  std::size_t draws = 0;
  const std::size_t max_draws = 100 * pair_budget + 1000;
  while (chosen.size() < pair_budget && draws < max_draws) {
    ++draws;
    PointId x = static_cast<PointId>(rng.next_below(space.size()));
    PointId y = static_cast<PointId>(rng.next_below(space.size()));
    if (x == y) continue;
    if (x > y) std::swap(x, y);
    if (space(x, y) <= 0.0) continue;
    chosen.insert({x, y});
  }
  pairs.assign(chosen.begin(), chosen.end());
  return pairs;
}

}  // namespace

NonConvexityOutcome uniform_nonconvexity(const FiniteMetricSpace& space,
                                         const std::vector<double>& delta_grid,
                                         const std::vector<double>& lambda_grid,
                                         std::size_t pair_budget,
                                         std::uint64_t seed, Exec exec) {
  if (delta_grid.empty() || lambda_grid.empty())
    throw std::invalid_argument("uniform_nonconvexity: grids must be "
                                "non-empty");
  for (double dv : delta_grid)
    if (!(dv > 0.0) || !(dv < 0.5))
      throw std::invalid_argument("uniform_nonconvexity: delta values must "
                                  "lie in (0, 1/2)");
  for (double lv : lambda_grid)
    if (!(lv > 0.0) || !(lv < 1.0))
      throw std::invalid_argument("uniform_nonconvexity: lambda values must "
                                  "lie in (0, 1)");
  if (pair_budget == 0)
    throw std::invalid_argument("uniform_nonconvexity: pair budget must be "
                                "positive");

  std::vector<double> deltas(delta_grid);
  std::sort(deltas.begin(), deltas.end(), std::greater<double>());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
  std::vector<double> lams_all(lambda_grid);
  std::sort(lams_all.begin(), lams_all.end());
  lams_all.erase(std::unique(lams_all.begin(), lams_all.end()),
                 lams_all.end());

  const auto pairs = pick_pairs(space, pair_budget, seed);

  NonConvexityOutcome out;
  out.pairs_scanned = pairs.size();
  // No scannable pair means nothing can refute: certify at the grid top.
  if (pairs.empty()) {
    out.certified = true;
    out.delta = deltas.front();
    for (double lv : lams_all)
      if (lv > out.delta && lv < 1.0 - out.delta)
        out.lambda_grid.push_back(lv);
    return out;
  }

  std::ptrdiff_t first_fail_at_max = -1;
  std::vector<double> lams_at_max;

  for (std::size_t di = 0; di < deltas.size(); ++di) {
    const double delta = deltas[di];
    std::vector<double> lams;
    for (double lv : lams_all)
      if (lv > delta && lv < 1.0 - delta) lams.push_back(lv);
    if (di == 0) lams_at_max = lams;

    if (lams.empty()) {
      if (di == 0) first_fail_at_max = 0;
      continue;
    }

    // The first pair alone usually kills a delta that is too big; check it
    // before fanning out over the whole pair set.
    PairScan head = scan_pair_lenses(space, pairs[0].first, pairs[0].second,
                                     lams, delta);
    std::ptrdiff_t first_fail = head.has_empty ? -1 : 0;
    std::vector<PairScan> results(pairs.size());
    results[0] = head;
    if (first_fail < 0 && pairs.size() > 1) {
      const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(pairs.size());
      std::ptrdiff_t fail_min = np;
      if (exec == Exec::Parallel) {
#pragma omp parallel
        {
          std::ptrdiff_t local_fail = np;
#pragma omp for schedule(dynamic, 16) nowait
          for (std::ptrdiff_t t = 1; t < np; ++t) {
            results[t] = scan_pair_lenses(space, pairs[t].first,
                                          pairs[t].second, lams, delta);
            if (!results[t].has_empty) local_fail = std::min(local_fail, t);
          }
#pragma omp critical(snowprobe_nonconvexity_fail)
          fail_min = std::min(fail_min, local_fail);
        }
      } else {
        for (std::ptrdiff_t t = 1; t < np; ++t) {
          results[t] = scan_pair_lenses(space, pairs[t].first, pairs[t].second,
                                        lams, delta);
          if (!results[t].has_empty) fail_min = std::min(fail_min, t);
        }
      }
      if (fail_min < np) first_fail = fail_min;
    }

    if (first_fail < 0) {
      out.certified = true;
      out.delta = delta;
      out.lambda_grid = std::move(lams);
      out.pair_entries.reserve(pairs.size());
      for (std::size_t t = 0; t < pairs.size(); ++t)
        out.pair_entries.push_back(
            {pairs[t].first, pairs[t].second, results[t].lambda});
      return out;
    }
    if (di == 0) first_fail_at_max = first_fail;
  }

  // Nothing certified: report the failing pair at the largest delta with the
  // lowest-index lens member for every grid lambda.
  out.certified = false;
  out.delta = deltas.front();
  out.lambda_grid = lams_at_max;
  if (first_fail_at_max >= 0) {
    const auto [fx, fy] = pairs[static_cast<std::size_t>(first_fail_at_max)];
    out.refuted_x = fx;
    out.refuted_y = fy;
    const double d = space(fx, fy);
    const PointId n = static_cast<PointId>(space.size());
    for (double lv : out.lambda_grid) {
      const double r1 = (lv + out.delta) * d;
      const double r2 = (1.0 - lv + out.delta) * d;
      PointId member = -1;
      for (PointId z = 0; z < n; ++z) {
        if (space(fx, z) <= r1 && space(z, fy) <= r2) {
          member = z;
          break;
        }
      }
      out.lens_witnesses.push_back(member);
    }
  }
  return out;
}

}  // namespace snowprobe
