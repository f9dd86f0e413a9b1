#include "snowprobe/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <vector>

namespace snowprobe {

SpecParseError::SpecParseError(const std::string& msg, std::size_t offset)
    : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
      offset(offset) {}

namespace {

class SpecParser {
 public:
  explicit SpecParser(const std::string& text) : text_(text) {}

  SpaceDescriptor parse() {
    SpaceDescriptor d = parse_spec();
    skip_ws();
    if (pos_ != text_.size())
      throw SpecParseError("trailing input after space spec", pos_);
    return d;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c))
      throw SpecParseError(std::string("expected '") + c + "'", pos_);
  }

  std::string parse_word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalpha(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) throw SpecParseError("expected a space kind", start);
    return text_.substr(start, pos_ - start);
  }

  int parse_int() {
    skip_ws();
    std::size_t start = pos_;
    char* end = nullptr;
    long v = std::strtol(text_.c_str() + pos_, &end, 10);
    if (end == text_.c_str() + pos_)
      throw SpecParseError("expected an integer", start);
    pos_ = static_cast<std::size_t>(end - text_.c_str());
    if (v < 1 || v > 1 << 20)
      throw SpecParseError("integer parameter out of range", start);
    return static_cast<int>(v);
  }

  double parse_real() {
    skip_ws();
    std::size_t start = pos_;
    char* end = nullptr;
    double v = std::strtod(text_.c_str() + pos_, &end);
    if (end == text_.c_str() + pos_)
      throw SpecParseError("expected a number", start);
    pos_ = static_cast<std::size_t>(end - text_.c_str());
    if (!std::isfinite(v))
      throw SpecParseError("parameter must be finite", start);
    return v;
  }

  SpaceDescriptor parse_spec() {
    skip_ws();
    std::size_t kind_at = pos_;
    std::string kind = parse_word();
    if (kind == "euclidean") {
      expect(':');
      return SpaceDescriptor::euclidean(parse_int());
    }
    if (kind == "normed") {
      expect(':');
      int dim = parse_int();
      expect(':');
      skip_ws();
      if (text_.compare(pos_, 3, "inf") == 0) {
        pos_ += 3;
        return SpaceDescriptor::normed(
            dim, std::numeric_limits<double>::infinity());
      }
      std::size_t q_at = pos_;
      double q = parse_real();
      if (q < 1.0)
        throw SpecParseError("norm exponent must be >= 1 or \"inf\"", q_at);
      return SpaceDescriptor::normed(dim, q);
    }
    if (kind == "snowflake") {
      expect('(');
      SpaceDescriptor base = parse_spec();
      expect(',');
      std::size_t eps_at = pos_;
      double eps = parse_real();
      if (!(eps > 0.0) || eps > 1.0)
        throw SpecParseError("snowflake exponent must be in (0, 1]", eps_at);
      expect(')');
      return SpaceDescriptor::snowflaked(std::move(base), eps);
    }
    if (kind == "mixed") {
      expect('(');
      std::vector<double> eps;
      do {
        std::size_t e_at = pos_;
        double e = parse_real();
        if (!(e > 0.0) || e > 1.0)
          throw SpecParseError("mixed exponents must be in (0, 1]", e_at);
        eps.push_back(e);
      } while (eat(','));
      expect(')');
      return SpaceDescriptor::mixed_product(std::move(eps));
    }
    if (kind == "shift") {
      expect(':');
      return SpaceDescriptor::shift_space(parse_int());
    }
    throw SpecParseError("unknown space kind \"" + kind + "\"", kind_at);
  }
};

double median_nearest_neighbor(const FiniteMetricSpace& space) {
  const PointId n = static_cast<PointId>(space.size());
  std::vector<double> nn(space.size(),
                         std::numeric_limits<double>::infinity());
  for (PointId i = 0; i < n; ++i)
    for (PointId j = 0; j < n; ++j)
      if (i != j) nn[i] = std::min(nn[i], space(i, j));
  std::sort(nn.begin(), nn.end());
  return nn[nn.size() / 2];
}

}  // namespace

SpaceDescriptor parse_space_spec(const std::string& text) {
  return SpecParser(text).parse();
}

const char* conclusion_tag_name(ConclusionTag tag) {
  switch (tag) {
    case ConclusionTag::GeodesicLike:
      return "geodesic-like";
    case ConclusionTag::SnowflakeLike:
      return "snowflake-like";
    case ConclusionTag::UltrametricLike:
      return "ultrametric-like";
    case ConclusionTag::InvalidMetric:
      return "invalid-metric";
    case ConclusionTag::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

AnalysisReport run_report(const FiniteMetricSpace& space,
                          const std::string& input_name,
                          const ReportOptions& opts) {
  AnalysisReport rep;
  rep.input = input_name;
  rep.points = space.size();

  ValidationOptions vopts;
  vopts.rel_tol = opts.tol;
  vopts.exec = opts.exec;
  rep.violations = validate_metric(space, vopts);
  rep.metric_valid = is_valid_metric(rep.violations);
  if (!rep.metric_valid) {
    rep.tag = ConclusionTag::InvalidMetric;
    return rep;
  }
  if (space.size() < 3) {
    rep.tag = ConclusionTag::Inconclusive;
    return rep;
  }

  try {
    CriticalExponentResult ce =
        desnowflake_exponent(space, opts.exponent_tol, opts.exec);
    rep.p_star = ce.p_star;
    rep.witness = ce.witness;
  } catch (const InvalidTripleError&) {
    // Stricter exponent tolerance can reject a triple the validator let
    // through; that is still an invalid metric for our purposes.
    rep.tag = ConclusionTag::InvalidMetric;
    return rep;
  }

  const double diam = space.max_distance();
  const double h_med = median_nearest_neighbor(space);
  rep.between_tol =
      std::max(opts.tol, 0.25 * (h_med / diam) * (h_med / diam));
  auto certs = find_between_points(space, rep.between_tol, opts.exec);
  rep.between_count = certs.size();
  if (!certs.empty()) rep.best_between = certs.front();

  if (opts.run_nonconvexity)
    rep.nonconvexity =
        uniform_nonconvexity(space, default_delta_grid(),
                             default_lambda_grid(), opts.pair_budget,
                             opts.seed, opts.exec);
  if (opts.run_dimension && diam > 0.0)
    rep.dimension = box_dimension(space, default_box_scales(space), opts.exec);

  if (std::isinf(*rep.p_star))
    rep.tag = ConclusionTag::UltrametricLike;
  else if (rep.between_count > 0)
    rep.tag = ConclusionTag::GeodesicLike;
  else
    rep.tag = ConclusionTag::SnowflakeLike;
  return rep;
}

int report_exit_code(const AnalysisReport& report) {
  switch (report.tag) {
    case ConclusionTag::InvalidMetric:
      return 2;
    case ConclusionTag::Inconclusive:
      return 3;
    default:
      return 0;
  }
}

JsonValue report_to_json(const AnalysisReport& report) {
  JsonValue root = JsonValue::object();
  root["input"] = JsonValue(report.input);
  root["points"] = JsonValue(report.points);
  root["conclusion"] = JsonValue(conclusion_tag_name(report.tag));

  JsonValue metric = JsonValue::object();
  metric["valid"] = JsonValue(report.metric_valid);
  JsonValue viols = JsonValue::array();
  for (const ViolationReport& v : report.violations) {
    JsonValue jv = JsonValue::object();
    jv["kind"] = JsonValue(violation_kind_name(v.kind));
    jv["x"] = JsonValue(static_cast<std::int64_t>(v.x));
    jv["y"] = JsonValue(static_cast<std::int64_t>(v.y));
    jv["z"] = JsonValue(static_cast<std::int64_t>(v.z));
    jv["defect"] = JsonValue(v.defect);
    jv["warning"] = JsonValue(v.warning);
    viols.push_back(std::move(jv));
  }
  metric["violations"] = std::move(viols);
  root["metric"] = std::move(metric);

  if (report.p_star) {
    root["p_star"] = JsonValue::real_or_inf(*report.p_star);
    if (report.witness) {
      JsonValue w = JsonValue::object();
      w["x"] = JsonValue(static_cast<std::int64_t>(report.witness->x));
      w["z"] = JsonValue(static_cast<std::int64_t>(report.witness->z));
      w["y"] = JsonValue(static_cast<std::int64_t>(report.witness->y));
      w["a"] = JsonValue(report.witness->a);
      w["b"] = JsonValue(report.witness->b);
      w["p_crit"] = JsonValue::real_or_inf(report.witness->p_crit);
      root["witness"] = std::move(w);
    }
  }

  if (report.points >= 3 && report.metric_valid &&
      report.tag != ConclusionTag::InvalidMetric) {
    JsonValue between = JsonValue::object();
    between["tolerance"] = JsonValue(report.between_tol);
    between["count"] = JsonValue(report.between_count);
    if (report.best_between) {
      JsonValue b = JsonValue::object();
      b["x"] = JsonValue(static_cast<std::int64_t>(report.best_between->x));
      b["z"] = JsonValue(static_cast<std::int64_t>(report.best_between->z));
      b["y"] = JsonValue(static_cast<std::int64_t>(report.best_between->y));
      b["defect"] = JsonValue(report.best_between->defect);
      between["best"] = std::move(b);
    }
    root["between"] = std::move(between);
  }

  if (report.nonconvexity) {
    const NonConvexityOutcome& nc = *report.nonconvexity;
    JsonValue jn = JsonValue::object();
    jn["certified"] = JsonValue(nc.certified);
    jn["delta"] = JsonValue(nc.delta);
    jn["pairs_scanned"] = JsonValue(nc.pairs_scanned);
    if (!nc.certified && nc.refuted_x >= 0) {
      JsonValue rf = JsonValue::object();
      rf["x"] = JsonValue(static_cast<std::int64_t>(nc.refuted_x));
      rf["y"] = JsonValue(static_cast<std::int64_t>(nc.refuted_y));
      jn["refuted_pair"] = std::move(rf);
    }
    root["nonconvexity"] = std::move(jn);
  }

  if (report.dimension) {
    JsonValue jd = JsonValue::object();
    jd["slope"] = JsonValue(report.dimension->slope);
    jd["residual"] = JsonValue(report.dimension->residual);
    JsonValue recs = JsonValue::array();
    for (const BoxCountRecord& r : report.dimension->records) {
      JsonValue jr = JsonValue::object();
      jr["scale"] = JsonValue(r.scale);
      jr["count"] = JsonValue(r.count);
      recs.push_back(std::move(jr));
    }
    jd["records"] = std::move(recs);
    root["dimension"] = std::move(jd);
  }

  return root;
}

}  // namespace snowprobe
