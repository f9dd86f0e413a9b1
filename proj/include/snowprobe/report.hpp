#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "snowprobe/betweenness.hpp"
#include "snowprobe/descriptors.hpp"
#include "snowprobe/dimension.hpp"
#include "snowprobe/exec.hpp"
#include "snowprobe/exponents.hpp"
#include "snowprobe/json_value.hpp"
#include "snowprobe/metric_space.hpp"

namespace snowprobe {

class SpecParseError : public std::runtime_error {
 public:
  SpecParseError(const std::string& msg, std::size_t offset);
  std::size_t offset;  // byte position in the spec string
};

// Grammar: euclidean:N | normed:N:Q (Q a real or "inf") | shift:N
//        | snowflake(SPEC,EPS) | mixed(E1,...,EK)
SpaceDescriptor parse_space_spec(const std::string& text);

enum class ConclusionTag {
  GeodesicLike,
  SnowflakeLike,
  UltrametricLike,
  InvalidMetric,
  Inconclusive,
};

const char* conclusion_tag_name(ConclusionTag tag);

struct ReportOptions {
  double tol = 1e-9;           // metric validation tolerance
  double exponent_tol = 1e-12;
  std::size_t pair_budget = 2000;
  std::uint64_t seed = 1;
  bool run_nonconvexity = true;
  bool run_dimension = true;
  Exec exec = Exec::Parallel;
};

struct AnalysisReport {
  std::string input;
  bool metric_valid = false;
  std::vector<ViolationReport> violations;
  std::size_t points = 0;

  std::optional<double> p_star;  // set when the exponent stage ran
  std::optional<TripleExponent> witness;

  // Between-point tolerance is scaled to sample density so genuinely
  // geodesic samples are recognized even though no triple is exactly
  // additive in floating point.
  double between_tol = 0.0;
  std::size_t between_count = 0;
  std::optional<BetweennessCertificate> best_between;

  std::optional<NonConvexityOutcome> nonconvexity;
  std::optional<DimensionEstimate> dimension;

  ConclusionTag tag = ConclusionTag::Inconclusive;
};

// validate -> exponent -> between -> nonconvexity -> dimension, with the
// verdict precedence: invalid metric, too few points, p_star = +inf,
// between-points present, finite p_star.
AnalysisReport run_report(const FiniteMetricSpace& space,
                          const std::string& input_name,
                          const ReportOptions& opts = {});

// 0 for a conclusive tag, 2 for invalid-metric, 3 for inconclusive.
int report_exit_code(const AnalysisReport& report);

JsonValue report_to_json(const AnalysisReport& report);

}  // namespace snowprobe
