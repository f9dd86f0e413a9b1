#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "snowprobe/betweenness.hpp"
#include "snowprobe/chains.hpp"
#include "snowprobe/descriptors.hpp"
#include "snowprobe/dimension.hpp"
#include "snowprobe/exponents.hpp"
#include "snowprobe/geodesics.hpp"
#include "snowprobe/metric_space.hpp"
#include "snowprobe/report.hpp"

using namespace snowprobe;

namespace {

int g_failures = 0;
bool g_ok = true;

void check(bool cond, const std::string& what) {
  if (!cond) {
    g_ok = false;
    std::cerr << "       " << what << "\n";
  }
}

void run_criterion(int id, const char* title, void (*body)()) {
  using clock = std::chrono::steady_clock;
  g_ok = true;
  auto t0 = clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    g_ok = false;
    std::cerr << "       unexpected exception: " << e.what() << "\n";
  }
  double secs = std::chrono::duration<double>(clock::now() - t0).count();
  if (!g_ok) ++g_failures;
  std::printf("[%s] criterion %2d: %s (%.2fs)\n", g_ok ? "PASS" : "FAIL", id,
              title, secs);
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

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

void exponent_recovery() {
  for (double eps : {0.5, 1.0 / 3.0, 0.75}) {
    auto flake = materialize(sample(
        SpaceDescriptor::snowflaked(SpaceDescriptor::euclidean(2), eps),
        200, 1));
    auto t0 = std::chrono::steady_clock::now();
    auto res = desnowflake_exponent(flake);
    double secs = elapsed_since(t0);
    double want = 1.0 / eps;
    std::ostringstream msg;
    msg << "exponent " << res.p_star << " off target " << want
        << " by more than 1e-6";
    check(std::isfinite(res.p_star) && std::fabs(res.p_star - want) <= 1e-6,
          msg.str());
    check(res.witness.has_value(), "finite exponent without a witness");
    check(secs < 10.0, "exponent run exceeded 10 s");
  }
}

void ultrametric_detection() {
  auto shift = materialize(sample(SpaceDescriptor::shift_space(5), 200, 1));
  auto t0 = std::chrono::steady_clock::now();
  auto res = desnowflake_exponent(shift);
  check(std::isinf(res.p_star), "shift sample exponent is not infinite");
  check(!res.witness.has_value(), "infinite exponent carries a witness");

  const PointId n = static_cast<PointId>(shift.size());
  bool ultra = true;
  for (PointId i = 0; i < n && ultra; ++i)
    for (PointId j = i + 1; j < n && ultra; ++j)
      for (PointId k = j + 1; k < n; ++k) {
        double a = shift(i, j), b = shift(i, k), c = shift(j, k);
        double slack = 1e-12 * std::max({a, b, c});
        if (a > std::max(b, c) + slack || b > std::max(a, c) + slack ||
            c > std::max(a, b) + slack) {
          ultra = false;
          break;
        }
      }
  check(ultra, "a sampled triple violates the ultrametric inequality");
  check(elapsed_since(t0) < 5.0, "ultrametric run exceeded 5 s");
}

void gauge_curve() {
  auto seg = even_segment(1001, 1.0);
  auto ctx = GaugeContext::make(seg, 0, 1000);
  auto rows = gauge_scan(ctx, 1.0, 6.0, 51);
  check(rows.size() == 51, "unexpected scan length");
  check(rows.front().first == 1.0 && rows.front().second == 1.0,
        "gauge at p = 1 is not exactly 1");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double p = rows[i].first, phi = rows[i].second;
    double want = std::pow(2.0, 1.0 - p);
    if (std::fabs(phi - want) > 2e-3) {
      std::ostringstream msg;
      msg << "gauge(" << p << ") = " << phi << " vs " << want;
      check(false, msg.str());
      break;
    }
    if (i > 0 && phi > rows[i - 1].second) {
      check(false, "gauge curve is not non-increasing");
      break;
    }
  }
}

void chain_recursion() {
  auto oracle = SubdivisionOracle::exact(
      SpaceDescriptor::snowflaked(SpaceDescriptor::euclidean(1), 0.5),
      {0.0}, {0.5}, {1.0});
  auto t0 = std::chrono::steady_clock::now();
  double worst = verify_recursion(oracle, 4.0, 10);
  check(worst <= 1e-10, "recursion deviation above 1e-10");
  for (int k = 0; k <= 10; ++k) {
    double got = p_length(refine_chain(oracle, k), 4.0);
    double want = std::pow(2.0, -(k + 1));
    if (std::fabs(got - want) / want > 1e-10) {
      check(false, "depth " + std::to_string(k) + " length off closed form");
      break;
    }
  }
  check(elapsed_since(t0) < 1.0, "chain run exceeded 1 s");
}

void geodesic_constructor() {
  SpaceDescriptor plane = SpaceDescriptor::euclidean(2);
  double delta = 1.0 / 3.0;
  auto oracle = BetweenOracle::linear(plane, delta);
  Point x = {0.0, 0.0}, y = {0.9, 0.6};
  auto g = construct_geodesic(oracle, x, y, delta, 8);
  check(isometry_defect(g).max_defect <= 1e-10,
        "isometry defect above 1e-10");

  auto shallow = construct_geodesic(oracle, x, y, delta, 7);
  for (std::size_t i = 0; i < shallow.points.size(); ++i) {
    if (g.points[2 * i] != shallow.points[i] ||
        g.schedule.endpoints[2 * i] != shallow.schedule.endpoints[i]) {
      check(false, "nested consistency broken at index " + std::to_string(i));
      return;
    }
  }
}

void nonconvexity_threshold() {
  auto flake = even_segment(301, 0.5);
  double md = midpoint_defect(flake, 0, 300);
  double want = std::pow(2.0, -0.5) - 0.5;
  std::ostringstream msg;
  msg << "midpoint defect " << md << " vs " << want;
  check(std::fabs(md - want) <= 0.005, msg.str());

  auto cert = uniform_nonconvexity(flake, {0.15}, default_lambda_grid(),
                                   1u << 20, 1);
  check(cert.certified, "delta = 0.15 not certified");

  auto ref = uniform_nonconvexity(flake, {0.25}, default_lambda_grid(),
                                  1u << 20, 1);
  check(!ref.certified, "delta = 0.25 not refuted");
  check(ref.refuted_x >= 0, "refutation without a witness pair");
  if (ref.refuted_x >= 0) {
    auto half =
        lens_members(flake, {ref.refuted_x, ref.refuted_y, 0.5, 0.25});
    check(!half.empty(), "half lens of refuted pair is empty");
  }
}

void between_dichotomy() {
  SampleSet set = sample(SpaceDescriptor::euclidean(2), 60, 9);
  set.points.push_back({0.1, 0.2});
  set.points.push_back({0.4, 0.2});
  set.points.push_back({0.9, 0.2});
  auto plane = materialize(set);
  auto certs = find_between_points(plane, 1e-9);
  check(!certs.empty(), "no exact certificate on collinear sample");
  for (const auto& c : certs)
    if (c.defect > 1e-9 * plane(c.x, c.y)) {
      check(false, "certificate defect above tolerance");
      break;
    }

  auto flake = materialize(sample(
      SpaceDescriptor::snowflaked(SpaceDescriptor::euclidean(2), 0.5), 200,
      2));
  check(find_between_points(flake, 1e-3).empty(),
        "snowflaked sample yields certificates");
}

void dimension_scaling() {
  auto seg = even_segment(1000, 1.0);
  std::vector<double> seg_scales;
  for (int k = 2; k <= 7; ++k) seg_scales.push_back(std::pow(2.0, -k));
  auto seg_est = box_dimension(seg, seg_scales);
  std::ostringstream m1;
  m1 << "segment slope " << seg_est.slope << " outside 1.0 +- 0.15";
  check(std::fabs(seg_est.slope - 1.0) <= 0.15, m1.str());

  auto flake = even_segment(1000, 0.5);
  std::vector<double> flake_scales;
  for (int k = 2; k <= 9; ++k)
    flake_scales.push_back(std::pow(2.0, -k / 2.0));
  auto flake_est = box_dimension(flake, flake_scales);
  std::ostringstream m2;
  m2 << "snowflake slope " << flake_est.slope << " outside 2.0 +- 0.3";
  check(std::fabs(flake_est.slope - 2.0) <= 0.3, m2.str());

  double seg_p = desnowflake_exponent(even_segment(400, 1.0)).p_star;
  double flake_p = desnowflake_exponent(even_segment(400, 0.5)).p_star;
  auto plane = materialize(sample(SpaceDescriptor::euclidean(2), 300, 4));
  double plane_p = desnowflake_exponent(plane).p_star;
  auto plane_est = box_dimension(plane, default_box_scales(plane));

  auto bounded = [&](const char* name, double p, const DimensionEstimate& e) {
    double dim = e.slope + e.residual;
    std::ostringstream msg;
    msg << name << " exponent " << p << " above dimension " << dim;
    check(p <= dim, msg.str());
  };
  bounded("segment", seg_p, seg_est);
  bounded("snowflake", flake_p, flake_est);
  bounded("plane", plane_p, plane_est);
}

void dilation_verification() {
  SpaceDescriptor mixed = SpaceDescriptor::mixed_product({1.0, 0.5});
  auto set = sample(mixed, 80, 6);
  for (double lam : {0.5, 2.0, 10.0}) {
    auto map =
        MapDescriptor::coordinate_dilation({lam, lam * lam}, lam);
    double defect = verify_map(mixed, map, set);
    std::ostringstream msg;
    msg << "dilation defect " << defect << " at factor " << lam;
    check(defect <= 1e-12, msg.str());
  }

  SpaceDescriptor shift = SpaceDescriptor::shift_space(4);
  auto bits = sample(shift, 60, 8);
  std::size_t skipped = 0;
  double defect = verify_map(shift, MapDescriptor::shift(1), bits, &skipped);
  check(defect == 0.0, "shift map defect is nonzero");
  check(skipped < bits.points.size(), "shift map undefined everywhere");
}

void parallelogram_test() {
  SampleSet pts;
  pts.points = {{1.0, 0.0}, {0.0, 1.0}, {0.3, 0.7}, {0.9, 0.2},
                {0.5, 0.5}, {0.2, 0.9}, {0.7, 0.1}, {0.4, 0.3}};

  pts.space = SpaceDescriptor::normed(2, 2.0);
  auto round = parallelogram_defect(pts.space, pts);
  check(round.max_defect <= 1e-12, "2-norm parallelogram defect too large");

  pts.space = SpaceDescriptor::normed(
      2, std::numeric_limits<double>::infinity());
  auto sup = parallelogram_defect(pts.space, pts);
  check(sup.max_defect >= 0.5, "sup-norm defect below 0.5");
  check(sup.u >= 0 && sup.v >= 0, "sup-norm witness pair missing");

  pts.space = SpaceDescriptor::normed(2, 1.0);
  auto taxi = parallelogram_defect(pts.space, pts);
  check(taxi.max_defect >= 0.5, "1-norm defect below 0.5");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void cli_determinism() {
  const std::string cli = "'" SNOWPROBE_CLI_PATH "'";
  std::filesystem::path dir = "acceptance_tmp";
  std::filesystem::create_directories(dir);
  std::string flake = (dir / "flake.json").string();

  auto run = [&](const std::string& args) {
    std::string cmd = cli + " " + args;
    return std::system(cmd.c_str());
  };
  check(run("generate --space 'snowflake(euclidean:2,0.5)' --count 40 "
            "--seed 3 --out " +
            flake) == 0,
        "generate fixture failed");

  std::vector<std::pair<std::string, std::string>> cases = {
      {"generate",
       "generate --space 'snowflake(euclidean:2,0.5)' --count 40 --seed 3"},
      {"validate", "validate --in " + flake + " --json"},
      {"exponent", "exponent --in " + flake + " --json"},
      {"gauge", "gauge --in " + flake + " --a 0 --b 1 --json"},
      {"between", "between --in " + flake + " --json"},
      {"nonconvexity",
       "nonconvexity --in " + flake + " --pairs 300 --json"},
      {"chains",
       "chains --space 'snowflake(euclidean:1,0.5)' --p 4 --depth 6 "
       "--json"},
      {"geodesic",
       "geodesic --space euclidean:2 --from 0,0 --to 1,1 --delta 0.25 "
       "--depth 6 --json"},
      {"dimension", "dimension --in " + flake + " --json"},
      {"spheres", "spheres --in " + flake + " --radii auto:16 --json"},
      {"report", "report --in " + flake + " --pairs 300 --json"},
  };

  for (const auto& [name, args] : cases) {
    std::string a = (dir / (name + "_t1.json")).string();
    std::string b = (dir / (name + "_t8.json")).string();
    int rc1 = run(args + " --threads 1 --out " + a);
    int rc8 = run(args + " --threads 8 --out " + b);
    if (rc1 != 0 || rc8 != 0) {
      check(false, name + " exited nonzero");
      continue;
    }
    std::string out1 = slurp(a), out8 = slurp(b);
    check(!out1.empty(), name + " produced no output");
    check(out1 == out8, name + " output differs across thread counts");
  }

  std::filesystem::remove_all(dir);
}

}  // namespace

int main() {
  std::printf("snowprobe acceptance checks\n");
  run_criterion(1, "de-snowflake exponent recovery", exponent_recovery);
  run_criterion(2, "ultrametric detection", ultrametric_detection);
  run_criterion(3, "gauge curve closed form", gauge_curve);
  run_criterion(4, "chain recursion closed form", chain_recursion);
  run_criterion(5, "geodesic constructor", geodesic_constructor);
  run_criterion(6, "non-convexity threshold", nonconvexity_threshold);
  run_criterion(7, "between-point dichotomy", between_dichotomy);
  run_criterion(8, "dimension scaling", dimension_scaling);
  run_criterion(9, "dilation verification", dilation_verification);
  run_criterion(10, "parallelogram test", parallelogram_test);
  run_criterion(11, "CLI determinism", cli_determinism);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
