#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "doctest.h"
#include "snowprobe/descriptors.hpp"
#include "snowprobe/json_value.hpp"
#include "snowprobe/metric_space.hpp"
#include "snowprobe/report.hpp"
#include "snowprobe/space_io.hpp"

using namespace snowprobe;

namespace {

std::size_t parse_offset(const std::string& text) {
  try {
    parse_space_spec(text);
  } catch (const SpecParseError& e) {
    return e.offset;
  }
  return static_cast<std::size_t>(-1);
}

std::string to_string(const SpaceDescriptor& desc) { return desc.to_string(); }

}  // namespace

TEST_CASE("space specs round-trip through their canonical form") {
  CHECK(to_string(parse_space_spec("euclidean:3")) == "euclidean:3");
  CHECK(to_string(parse_space_spec(" euclidean : 3 ")) == "euclidean:3");
  CHECK(to_string(parse_space_spec("shift:4")) == "shift:4");
  CHECK(to_string(parse_space_spec("normed:3:1.5")) == "normed:3:1.5");
  CHECK(to_string(parse_space_spec("snowflake(euclidean:1,0.5)")) ==
        "snowflake(euclidean:1,0.5)");
  CHECK(to_string(parse_space_spec("mixed(1,0.5)")) == "mixed(1,0.5)");

  auto normed_inf = parse_space_spec("normed:2:inf");
  CHECK(std::isinf(normed_inf.norm_q));
  CHECK(to_string(parse_space_spec(to_string(normed_inf))) ==
        to_string(normed_inf));

  auto nested =
      parse_space_spec("snowflake( snowflake( euclidean:2 , 0.5 ) , 0.5 )");
  CHECK(to_string(nested) == "snowflake(euclidean:2,0.25)");

  auto collapsed = parse_space_spec("snowflake(euclidean:2,1)");
  CHECK(to_string(collapsed) == "euclidean:2");
}

TEST_CASE("spec errors carry the offending byte offset") {
  CHECK(parse_offset("") == 0);
  CHECK(parse_offset("bogus:3") == 0);
  CHECK(parse_offset("euclidean") == 9);
  CHECK(parse_offset("euclidean:0") == 10);
  CHECK(parse_offset("euclidean:2 trailing") == 12);
  CHECK(parse_offset("normed:2:0.5") == 9);
  CHECK(parse_offset("snowflake(euclidean:1,1.5)") == 22);
  CHECK(parse_offset("mixed()") == 6);
}

TEST_CASE("a snowflaked sample is reported snowflake-like") {
  auto flake = materialize(sample(
      SpaceDescriptor::snowflaked(SpaceDescriptor::euclidean(2), 0.5), 120,
      1));
  auto rep = run_report(flake, "flake sample");
  CHECK(rep.input == "flake sample");
  CHECK(rep.points == 120);
  CHECK(rep.metric_valid);
  CHECK(rep.tag == ConclusionTag::SnowflakeLike);
  REQUIRE(rep.p_star.has_value());
  CHECK(*rep.p_star == doctest::Approx(2.0).epsilon(0.05));
  CHECK(rep.witness.has_value());
  CHECK(rep.between_count == 0);
  CHECK(rep.nonconvexity.has_value());
  CHECK(rep.dimension.has_value());
  CHECK(report_exit_code(rep) == 0);
}

TEST_CASE("a dense plane sample is reported geodesic-like") {
  auto plane = materialize(sample(SpaceDescriptor::euclidean(2), 150, 1));
  ReportOptions opts;
  auto rep = run_report(plane, "plane sample", opts);
  CHECK(rep.tag == ConclusionTag::GeodesicLike);
  CHECK(rep.between_tol > opts.tol);
  CHECK(rep.between_count >= 1);
  REQUIRE(rep.best_between.has_value());
  CHECK(rep.best_between->defect <=
        rep.between_tol * plane(rep.best_between->x, rep.best_between->y));
  CHECK(report_exit_code(rep) == 0);
}

TEST_CASE("an ultrametric sample is reported by its infinite exponent") {
  auto shift = materialize(sample(SpaceDescriptor::shift_space(4), 80, 1));
  auto rep = run_report(shift, "shift sample");
  CHECK(rep.tag == ConclusionTag::UltrametricLike);
  REQUIRE(rep.p_star.has_value());
  CHECK(std::isinf(*rep.p_star));
  CHECK_FALSE(rep.witness.has_value());
  CHECK(report_exit_code(rep) == 0);
}

TEST_CASE("a broken matrix is reported, not thrown") {
  auto bad = FiniteMetricSpace::from_pairwise(3, {3.0, 1.0, 1.0});
  auto rep = run_report(bad, "bad");
  CHECK(rep.tag == ConclusionTag::InvalidMetric);
  CHECK_FALSE(rep.metric_valid);
  CHECK_FALSE(rep.violations.empty());
  CHECK_FALSE(rep.p_star.has_value());
  CHECK(report_exit_code(rep) == 2);
}

TEST_CASE("a near-degenerate triple fails the exponent stage only") {
  auto sliver =
      FiniteMetricSpace::from_pairwise(3, {1.0, 0.5, 0.5 - 1e-10});
  auto rep = run_report(sliver, "sliver");
  CHECK(rep.metric_valid);
  CHECK(rep.tag == ConclusionTag::InvalidMetric);
  CHECK_FALSE(rep.p_star.has_value());
  CHECK(report_exit_code(rep) == 2);
}

TEST_CASE("tiny spaces are inconclusive") {
  auto two = FiniteMetricSpace::from_pairwise(2, {1.0});
  auto rep = run_report(two, "pair");
  CHECK(rep.tag == ConclusionTag::Inconclusive);
  CHECK_FALSE(rep.p_star.has_value());
  CHECK(report_exit_code(rep) == 3);
}

TEST_CASE("stages can be switched off") {
  auto flake = materialize(sample(
      SpaceDescriptor::snowflaked(SpaceDescriptor::euclidean(2), 0.5), 60,
      2));
  ReportOptions opts;
  opts.run_nonconvexity = false;
  opts.run_dimension = false;
  auto rep = run_report(flake, "flake", opts);
  CHECK_FALSE(rep.nonconvexity.has_value());
  CHECK_FALSE(rep.dimension.has_value());
  auto text = report_to_json(rep).dump(2);
  CHECK(text.find("\"nonconvexity\"") == std::string::npos);
  CHECK(text.find("\"dimension\"") == std::string::npos);
}

TEST_CASE("report json is deterministic across runs and executors") {
  auto flake = materialize(sample(
      SpaceDescriptor::snowflaked(SpaceDescriptor::euclidean(2), 0.5), 80,
      5));
  ReportOptions par;
  ReportOptions ser;
  ser.exec = Exec::Serial;
  auto first = report_to_json(run_report(flake, "x", par)).dump(2);
  auto second = report_to_json(run_report(flake, "x", par)).dump(2);
  auto serial = report_to_json(run_report(flake, "x", ser)).dump(2);
  CHECK(first == second);
  CHECK(first == serial);

  auto shift = materialize(sample(SpaceDescriptor::shift_space(4), 50, 3));
  auto text = report_to_json(run_report(shift, "s", par)).dump(2);
  CHECK(text.find("\"p_star\": \"inf\"") != std::string::npos);
}

TEST_CASE("json objects emit keys in sorted order") {
  JsonValue doc = JsonValue::object();
  doc["zeta"] = JsonValue(1);
  doc["alpha"] = JsonValue(2);
  doc["mid"] = JsonValue(3);
  CHECK(doc.dump() == "{\"alpha\":2,\"mid\":3,\"zeta\":1}");
}

TEST_CASE("json reals carry 17 significant digits and round-trip") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  for (double v : {1.0 / 3.0, 0.1 + 0.2, 1e300, 5e-324, -123.456789012345}) {
    double back = std::strtod(format_real(v).c_str(), nullptr);
    CHECK(back == v);
  }
  CHECK_THROWS_AS(format_real(std::numeric_limits<double>::infinity()),
                  std::domain_error);
  CHECK(JsonValue::real_or_inf(
            std::numeric_limits<double>::infinity())
            .dump() == "\"inf\"");
  CHECK(JsonValue::real_or_inf(
            -std::numeric_limits<double>::infinity())
            .dump() == "\"-inf\"");
}

TEST_CASE("json strings escape control and quote characters") {
  JsonValue v(std::string("a\"b\\c\nd\te\x01"));
  CHECK(v.dump() == "\"a\\\"b\\\\c\\nd\\te\\u0001\"");
  CHECK(JsonValue().dump() == "null");
  CHECK(JsonValue(true).dump() == "true");
  CHECK(JsonValue::array().dump() == "[]");
  CHECK(JsonValue::object().dump() == "{}");
  JsonValue arr = JsonValue::array();
  CHECK_THROWS_AS(arr["k"] = JsonValue(1), std::logic_error);
  JsonValue obj = JsonValue::object();
  CHECK_THROWS_AS(obj.push_back(JsonValue(1)), std::logic_error);
  JsonValue indented = JsonValue::object();
  indented["k"] = JsonValue(1);
  CHECK(indented.dump(2) == "{\n  \"k\": 1\n}\n");
}

TEST_CASE("spaces round-trip through json text") {
  auto s = materialize(sample(SpaceDescriptor::euclidean(2), 5, 11));
  std::string text = space_to_json(s, "euclidean:2");
  std::istringstream in(text);
  auto loaded = read_space_json(in);
  CHECK(loaded.descriptor == "euclidean:2");
  REQUIRE(loaded.space.size() == s.size());
  for (PointId i = 0; i < 5; ++i)
    for (PointId j = 0; j < 5; ++j) CHECK(loaded.space(i, j) == s(i, j));
}

TEST_CASE("spaces round-trip through csv text") {
  auto s = FiniteMetricSpace::from_pairwise(3, {1.0, 2.0, 2.5},
                                            {"a", "b", "c"});
  std::string text = space_to_csv(s);
  std::istringstream in(text);
  auto loaded = read_space_csv(in);
  REQUIRE(loaded.space.size() == 3);
  CHECK(loaded.space.labels() == s.labels());
  for (PointId i = 0; i < 3; ++i)
    for (PointId j = 0; j < 3; ++j) CHECK(loaded.space(i, j) == s(i, j));
}

TEST_CASE("malformed space files are rejected") {
  std::istringstream not_json("not json at all");
  CHECK_THROWS_AS(read_space_json(not_json), std::invalid_argument);
  std::istringstream no_matrix("{\"labels\": []}");
  CHECK_THROWS_AS(read_space_json(no_matrix), std::invalid_argument);
  std::istringstream ragged("{\"matrix\": [[0, 1], [1]]}");
  CHECK_THROWS_AS(read_space_json(ragged), std::invalid_argument);
  std::istringstream strings("{\"matrix\": [[0, \"x\"], [\"x\", 0]]}");
  CHECK_THROWS_AS(read_space_json(strings), std::invalid_argument);
  std::istringstream bad_csv("0,1\nx,0\n");
  CHECK_THROWS_AS(read_space_csv(bad_csv), std::invalid_argument);
  std::istringstream ragged_csv("0,1,2\n1,0\n");
  CHECK_THROWS_AS(read_space_csv(ragged_csv), std::invalid_argument);
  CHECK_THROWS_AS(read_space_file("/nonexistent/path.json"),
                  std::invalid_argument);
}
