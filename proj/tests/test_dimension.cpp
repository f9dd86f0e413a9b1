#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "snowprobe/descriptors.hpp"
#include "snowprobe/dimension.hpp"
#include "snowprobe/exponents.hpp"
#include "snowprobe/metric_space.hpp"

using namespace snowprobe;

namespace {

FiniteMetricSpace even_segment(std::size_t count, double eps) {
  SampleSet set;
  set.space =
      eps < 1.0 ? SpaceDescriptor::snowflaked(SpaceDescriptor::euclidean(1),
                                              eps)
                : SpaceDescriptor::euclidean(1);
  for (std::size_t i = 0; i < count; ++i)
    set.points.push_back(
        {static_cast<double>(i) / static_cast<double>(count - 1)});
  return materialize(set);
}

double coverage_radius(const FiniteMetricSpace& s,
                       const std::vector<PointId>& net, std::size_t k) {
  double worst = 0.0;
  for (PointId i = 0; i < static_cast<PointId>(s.size()); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) best = std::min(best, s(net[j], i));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("the farthest-point sweep is a covering permutation") {
  auto plane = materialize(sample(SpaceDescriptor::euclidean(2), 60, 3));
  auto fpt = farthest_point_ordering(plane);
  REQUIRE(fpt.order.size() == plane.size());
  REQUIRE(fpt.insertion_distance.size() == plane.size());
  CHECK(fpt.order[0] == 0);
  CHECK(std::isinf(fpt.insertion_distance[0]));

  auto sorted = fpt.order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<PointId> iota(plane.size());
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(sorted == iota);

  for (std::size_t k = 2; k < fpt.insertion_distance.size(); ++k)
    CHECK(fpt.insertion_distance[k] <= fpt.insertion_distance[k - 1]);
  for (std::size_t k = 1; k < plane.size(); ++k)
    CHECK(coverage_radius(plane, fpt.order, k) ==
          fpt.insertion_distance[k]);

  auto ser = farthest_point_ordering(plane, Exec::Serial);
  CHECK(ser.order == fpt.order);
  CHECK(ser.insertion_distance == fpt.insertion_distance);
}

TEST_CASE("net counts on a dense segment scale like a line") {
  auto seg = even_segment(1000, 1.0);
  std::vector<double> scales;
  for (int k = 2; k <= 7; ++k) scales.push_back(std::pow(2.0, -k));
  auto est = box_dimension(seg, scales);
  CHECK(est.slope >= 0.85);
  CHECK(est.slope <= 1.15);
  REQUIRE(est.records.size() == scales.size());
  for (std::size_t i = 0; i < est.records.size(); ++i) {
    CHECK(est.records[i].scale == scales[i]);
    CHECK(est.records[i].count >= 1);
    if (i > 0) CHECK(est.records[i].count >= est.records[i - 1].count);
  }
}

TEST_CASE("snowflaking the segment doubles the count slope") {
  auto flake = even_segment(1000, 0.5);
  std::vector<double> scales;
  for (int k = 2; k <= 9; ++k) scales.push_back(std::pow(2.0, -k / 2.0));
  auto est = box_dimension(flake, scales);
  CHECK(est.slope >= 1.7);
  CHECK(est.slope <= 2.3);
}

TEST_CASE("the critical exponent stays below the dimension estimate") {
  auto flake = even_segment(400, 0.5);
  std::vector<double> scales;
  for (int k = 2; k <= 9; ++k) scales.push_back(std::pow(2.0, -k / 2.0));
  auto est = box_dimension(flake, scales);
  double p_star = desnowflake_exponent(flake).p_star;
  CHECK(p_star <= est.slope + est.residual);
}

TEST_CASE("powering distances relabels the net counts exactly") {
  auto base_set = sample(SpaceDescriptor::euclidean(2), 150, 13);
  auto base = materialize(base_set);
  for (double eps : {0.5, 1.0 / 3.0}) {
    SampleSet flake_set;
    flake_set.space =
        SpaceDescriptor::snowflaked(SpaceDescriptor::euclidean(2), eps);
    flake_set.points = base_set.points;
    auto flake = materialize(flake_set);
    auto fb = farthest_point_ordering(base);
    auto ff = farthest_point_ordering(flake);
    CHECK(fb.order == ff.order);
    for (double s : {0.05, 0.1, 0.2, 0.4}) {
      auto count = [](const std::vector<double>& ins, double r) {
        std::size_t c = 0;
        for (double d : ins)
          if (d > r) ++c;
        return c;
      };
      CHECK(count(ff.insertion_distance, std::pow(s, eps)) ==
            count(fb.insertion_distance, s));
    }
  }
}

TEST_CASE("a single point has slope zero") {
  auto lone = FiniteMetricSpace::from_pairwise(1, {});
  auto est = box_dimension(lone, {0.01, 0.1, 1.0});
  CHECK(est.slope == 0.0);
  CHECK(est.residual == 0.0);
}

TEST_CASE("box counting validates its scale set") {
  auto seg = even_segment(50, 1.0);
  CHECK_THROWS_AS(box_dimension(seg, {0.1, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(box_dimension(seg, {0.1, 0.2, -0.3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(box_dimension(seg, {0.1, 0.2, 0.4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(box_dimension(FiniteMetricSpace(), {0.01, 0.1, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("default scales run from diam/64 to diam/4") {
  auto seg = even_segment(100, 1.0);
  auto scales = default_box_scales(seg);
  REQUIRE(scales.size() == 8);
  double diam = seg.max_distance();
  CHECK(scales.front() == doctest::Approx(diam / 64.0).epsilon(1e-15));
  CHECK(scales.back() == doctest::Approx(diam / 4.0).epsilon(1e-15));
  for (std::size_t i = 1; i < scales.size(); ++i)
    CHECK(scales[i] > scales[i - 1]);
  auto lone = FiniteMetricSpace::from_pairwise(1, {});
  CHECK_THROWS_AS(default_box_scales(lone), std::invalid_argument);
}

TEST_CASE("half-radius covers stay small on low-dimensional samples") {
  auto seg = even_segment(200, 1.0);
  double diam = seg.max_distance();
  auto est = doubling_constant(seg, {diam / 2.0, diam / 4.0, diam / 8.0},
                               64, 7);
  CHECK(est.c_hat >= 2);
  CHECK(est.c_hat <= 5);
  CHECK(est.centers_tested == 64);
  CHECK(est.radii.size() == 3);

  auto plane = materialize(sample(SpaceDescriptor::euclidean(2), 150, 19));
  double pd = plane.max_distance();
  auto pest = doubling_constant(plane, {pd / 2.0, pd / 4.0}, 40, 7);
  CHECK(pest.c_hat >= 3);
  CHECK(pest.c_hat <= 25);

  auto ser = doubling_constant(seg, {diam / 2.0, diam / 4.0, diam / 8.0},
                               64, 7, Exec::Serial);
  CHECK(ser.c_hat == est.c_hat);
}

TEST_CASE("a generous radius around two points needs one ball") {
  auto two = FiniteMetricSpace::from_pairwise(2, {1.0});
  auto est = doubling_constant(two, {2.5}, 10, 1);
  CHECK(est.c_hat == 1);
  CHECK(est.centers_tested == 2);
}

TEST_CASE("doubling estimation validates its inputs") {
  auto two = FiniteMetricSpace::from_pairwise(2, {1.0});
  CHECK_THROWS_AS(doubling_constant(two, {}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(doubling_constant(two, {0.0}, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(doubling_constant(two, {1.0}, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(doubling_constant(FiniteMetricSpace(), {1.0}, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("dense segments hit every radius, discrete spaces leave gaps") {
  auto seg = even_segment(500, 1.0);
  auto gaps = sphere_surjectivity(seg, 0, {0.0, 0.25, 0.5, 1.0}, 0.01);
  REQUIRE(gaps.size() == 4);
  CHECK(gaps[0].gap == 0.0);
  for (const auto& g : gaps) {
    CHECK(g.within);
    CHECK(g.gap <= 0.0011);
  }

  auto ultra = FiniteMetricSpace::from_pairwise(3, {1.0, 2.0, 2.0});
  auto probe = sphere_surjectivity(ultra, 0, {1.0, 1.5}, 0.3);
  CHECK(probe[0].gap == 0.0);
  CHECK(probe[0].within);
  CHECK(probe[1].gap == 0.5);
  CHECK_FALSE(probe[1].within);

  CHECK_THROWS_AS(sphere_surjectivity(ultra, 5, {1.0}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sphere_surjectivity(ultra, 0, {3.0}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sphere_surjectivity(ultra, 0, {-1.0}, 0.1),
                  std::invalid_argument);
}
