#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "snowprobe/betweenness.hpp"
#include "snowprobe/chains.hpp"
#include "snowprobe/descriptors.hpp"
#include "snowprobe/dimension.hpp"
#include "snowprobe/exec.hpp"
#include "snowprobe/exponents.hpp"
#include "snowprobe/geodesics.hpp"
#include "snowprobe/json_value.hpp"
#include "snowprobe/metric_space.hpp"
#include "snowprobe/report.hpp"
#include "snowprobe/space_io.hpp"

namespace {

using namespace snowprobe;

int g_exit = 0;

struct Common {
  std::string in;
  std::string out;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  int threads = 0;
  bool json = false;
  bool serial = false;

  Exec exec() const { return serial ? Exec::Serial : Exec::Parallel; }
  void apply_threads() const { set_thread_count(threads); }
};

void add_common(CLI::App* cmd, Common& c, bool with_in) {
  if (with_in)
    cmd->add_option("--in", c.in, "input space file (.json or .csv)")
        ->required();
  cmd->add_option("--out", c.out, "write output to this file, not stdout");
  cmd->add_option("--seed", c.seed, "seed for randomized stages");
  cmd->add_option("--tol", c.tol, "tolerance for this command");
  cmd->add_option("--threads", c.threads,
                  "worker threads (0 keeps the runtime default)");
  cmd->add_flag("--json", c.json, "emit JSON instead of plain text");
  cmd->add_flag("--serial", c.serial,
                "use the serial reference implementations");
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + c.out);
  f << text;
  if (text.empty() || text.back() != '\n') f << '\n';
}

FiniteMetricSpace load(const Common& c) {
  return read_space_file(c.in).space;
}

Point parse_point(const std::string& text) {
  Point p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = std::stod(item, &used);
    while (used < item.size() &&
           std::isspace(static_cast<unsigned char>(item[used])))
      ++used;
    if (used != item.size())
      throw std::runtime_error("bad coordinate \"" + item + "\"");
    p.push_back(v);
  }
  if (p.empty()) throw std::runtime_error("empty point \"" + text + "\"");
  return p;
}

JsonValue violations_json(const std::vector<ViolationReport>& violations) {
  JsonValue arr = JsonValue::array();
  for (const ViolationReport& v : violations) {
    JsonValue jv = JsonValue::object();
    jv["kind"] = JsonValue(violation_kind_name(v.kind));
    jv["x"] = JsonValue(static_cast<std::int64_t>(v.x));
    jv["y"] = JsonValue(static_cast<std::int64_t>(v.y));
    jv["z"] = JsonValue(static_cast<std::int64_t>(v.z));
    jv["defect"] = JsonValue(v.defect);
    jv["warning"] = JsonValue(v.warning);
    arr.push_back(std::move(jv));
  }
  return arr;
}

JsonValue point_json(const Point& p) {
  JsonValue arr = JsonValue::array();
  for (double c : p) arr.push_back(JsonValue(c));
  return arr;
}

void cmd_generate(const Common& c, const std::string& spec,
                  std::size_t count) {
  c.apply_threads();
  SpaceDescriptor desc = parse_space_spec(spec);
  SampleSet samples = sample(desc, count, c.seed);
  FiniteMetricSpace space = materialize(samples);
  emit(c, space_to_json(space, desc.to_string()));
}

void cmd_validate(const Common& c) {
  c.apply_threads();
  FiniteMetricSpace space = load(c);
  ValidationOptions opts;
  opts.rel_tol = c.tol;
  opts.exec = c.exec();
  auto violations = validate_metric(space, opts);
  bool valid = is_valid_metric(violations);
  if (c.json) {
    JsonValue root = JsonValue::object();
    root["valid"] = JsonValue(valid);
    root["violations"] = violations_json(violations);
    emit(c, root.dump(1));
  } else {
    std::ostringstream text;
    text << (valid ? "valid metric" : "INVALID metric") << " ("
         << space.size() << " points, " << violations.size()
         << " findings)\n";
    for (const ViolationReport& v : violations) text << v.describe() << "\n";
    emit(c, text.str());
  }
  if (!valid) g_exit = 2;
}

void cmd_exponent(const Common& c) {
  c.apply_threads();
  FiniteMetricSpace space = load(c);
  CriticalExponentResult res = desnowflake_exponent(space, c.tol, c.exec());
  if (c.json) {
    JsonValue root = JsonValue::object();
    root["p_star"] = JsonValue::real_or_inf(res.p_star);
    if (res.witness) {
      JsonValue w = JsonValue::object();
      w["x"] = JsonValue(static_cast<std::int64_t>(res.witness->x));
      w["z"] = JsonValue(static_cast<std::int64_t>(res.witness->z));
      w["y"] = JsonValue(static_cast<std::int64_t>(res.witness->y));
      w["a"] = JsonValue(res.witness->a);
      w["b"] = JsonValue(res.witness->b);
      root["witness"] = std::move(w);
    }
    JsonValue tr = JsonValue::object();
    tr["iterations"] = JsonValue(res.trace.iterations);
    tr["bracket_width"] = JsonValue(res.trace.bracket_width);
    root["trace"] = std::move(tr);
    emit(c, root.dump(1));
  } else {
    std::ostringstream text;
    if (std::isinf(res.p_star)) {
      text << "p_star = +inf (no triple ever binds; ultrametric-like)\n";
    } else {
      text << "p_star = " << format_real(res.p_star);
      if (res.witness)
        text << "  witness triple (" << res.witness->x << ", "
             << res.witness->z << ", " << res.witness->y << ")";
      text << "\n";
    }
    emit(c, text.str());
  }
}

void cmd_gauge(const Common& c, PointId a, PointId b, double p_min,
               double p_max, int steps) {
  c.apply_threads();
  FiniteMetricSpace space = load(c);
  GaugeContext ctx = GaugeContext::make(space, a, b);
  auto scan = gauge_scan(ctx, p_min, p_max, steps);
  if (c.json) {
    JsonValue rows = JsonValue::array();
    for (const auto& [p, phi] : scan) {
      JsonValue row = JsonValue::array();
      row.push_back(JsonValue(p));
      row.push_back(JsonValue(phi));
      rows.push_back(std::move(row));
    }
    JsonValue root = JsonValue::object();
    root["gauge"] = std::move(rows);
    emit(c, root.dump(1));
  } else {
    std::ostringstream text;
    text << "p,phi\n";
    for (const auto& [p, phi] : scan)
      text << format_real(p) << ',' << format_real(phi) << "\n";
    emit(c, text.str());
  }
}

void cmd_between(const Common& c, std::size_t limit) {
  c.apply_threads();
  FiniteMetricSpace space = load(c);
  auto certs = find_between_points(space, c.tol, c.exec());
  if (c.json) {
    JsonValue root = JsonValue::object();
    root["count"] = JsonValue(certs.size());
    root["tolerance"] = JsonValue(c.tol);
    JsonValue arr = JsonValue::array();
    for (std::size_t i = 0; i < certs.size() && i < limit; ++i) {
      JsonValue jc = JsonValue::object();
      jc["x"] = JsonValue(static_cast<std::int64_t>(certs[i].x));
      jc["z"] = JsonValue(static_cast<std::int64_t>(certs[i].z));
      jc["y"] = JsonValue(static_cast<std::int64_t>(certs[i].y));
      jc["defect"] = JsonValue(certs[i].defect);
      arr.push_back(std::move(jc));
    }
    root["certificates"] = std::move(arr);
    emit(c, root.dump(1));
  } else {
    std::ostringstream text;
    text << certs.size() << " between-point certificates at tolerance "
         << format_real(c.tol) << "\n";
    for (std::size_t i = 0; i < certs.size() && i < limit; ++i)
      text << "  (" << certs[i].x << ", " << certs[i].z << ", " << certs[i].y
           << ")  defect " << format_real(certs[i].defect) << "\n";
    emit(c, text.str());
  }
}

void cmd_nonconvexity(const Common& c, std::size_t pairs,
                      std::vector<double> deltas, std::size_t limit) {
  c.apply_threads();
  FiniteMetricSpace space = load(c);
  if (deltas.empty()) deltas = default_delta_grid();
  NonConvexityOutcome res = uniform_nonconvexity(
      space, deltas, default_lambda_grid(), pairs, c.seed, c.exec());
  if (c.json) {
    JsonValue root = JsonValue::object();
    root["certified"] = JsonValue(res.certified);
    root["delta"] = JsonValue(res.delta);
    root["pairs_scanned"] = JsonValue(res.pairs_scanned);
    if (res.certified) {
      JsonValue entries = JsonValue::array();
      for (std::size_t i = 0; i < res.pair_entries.size() && i < limit; ++i) {
        JsonValue e = JsonValue::object();
        e["x"] = JsonValue(static_cast<std::int64_t>(res.pair_entries[i].x));
        e["y"] = JsonValue(static_cast<std::int64_t>(res.pair_entries[i].y));
        e["lambda"] = JsonValue(res.pair_entries[i].lambda);
        entries.push_back(std::move(e));
      }
      root["pair_entries"] = std::move(entries);
    } else if (res.refuted_x >= 0) {
      JsonValue rf = JsonValue::object();
      rf["x"] = JsonValue(static_cast<std::int64_t>(res.refuted_x));
      rf["y"] = JsonValue(static_cast<std::int64_t>(res.refuted_y));
      JsonValue wit = JsonValue::array();
      for (PointId w : res.lens_witnesses)
        wit.push_back(JsonValue(static_cast<std::int64_t>(w)));
      rf["lens_members"] = std::move(wit);
      root["refuted"] = std::move(rf);
    }
    emit(c, root.dump(1));
  } else {
    std::ostringstream text;
    if (res.certified)
      text << "uniformly non-convex on the sample: delta = "
           << format_real(res.delta) << " over " << res.pairs_scanned
           << " pairs\n";
    else
      text << "not certified: pair (" << res.refuted_x << ", "
           << res.refuted_y << ") has a non-empty lens at every lambda for "
           << "delta = " << format_real(res.delta) << "\n";
    emit(c, text.str());
  }
}

void cmd_chains(const Common& c, const std::string& spec, double p, int depth,
                const std::string& from, const std::string& mid,
                const std::string& to) {
  c.apply_threads();
  SpaceDescriptor desc = parse_space_spec(spec);
  if (desc.is_shift())
    throw std::runtime_error("chains: sequence spaces have no analytic "
                             "subdivision oracle");
  int dim = desc.point_dim();
  Point a(dim, 0.0), b(dim, 0.0), z;
  b[0] = 1.0;
  if (!from.empty()) a = parse_point(from);
  if (!to.empty()) b = parse_point(to);
  if (mid.empty()) {
    z.resize(dim);
    for (int i = 0; i < dim; ++i) z[i] = a[i] + 0.5 * (b[i] - a[i]);
  } else {
    z = parse_point(mid);
  }
  SubdivisionOracle oracle = SubdivisionOracle::exact(desc, a, z, b);
  double dab = distance(desc, a, b);
  bool unit = std::fabs(dab - 1.0) <= 1e-9;
  double cval = std::pow(distance(desc, a, z), p) +
                std::pow(distance(desc, z, b), p);

  JsonValue rows = JsonValue::array();
  std::ostringstream text;
  text << "k,p_length" << (unit ? ",expected" : "") << "\n";
  double worst = 0.0;
  for (int k = 0; k <= depth; ++k) {
    Chain chain = refine_chain(oracle, k);
    double len = p_length(chain, p);
    JsonValue row = JsonValue::object();
    row["k"] = JsonValue(k);
    row["p_length"] = JsonValue(len);
    text << k << ',' << format_real(len);
    if (unit) {
      double expected = std::pow(cval, k + 1);
      row["expected"] = JsonValue(expected);
      worst = std::max(worst, std::fabs(len - expected) / expected);
      text << ',' << format_real(expected);
    }
    text << "\n";
    rows.push_back(std::move(row));
  }
  if (c.json) {
    JsonValue root = JsonValue::object();
    root["p"] = JsonValue(p);
    root["r1"] = JsonValue(oracle.r1());
    root["r2"] = JsonValue(oracle.r2());
    root["c"] = JsonValue(cval);
    root["depths"] = std::move(rows);
    if (unit) root["max_deviation"] = JsonValue(worst);
    emit(c, root.dump(1));
  } else {
    if (unit) text << "max relative deviation " << format_real(worst) << "\n";
    emit(c, text.str());
  }
}

void cmd_geodesic(const Common& c, const std::string& spec,
                  const std::string& from, const std::string& to,
                  double delta, int depth) {
  c.apply_threads();
  SpaceDescriptor desc = parse_space_spec(spec);
  Point x = parse_point(from);
  Point y = parse_point(to);
  BetweenOracle oracle = BetweenOracle::linear(desc, delta);
  GeodesicApprox g = construct_geodesic(oracle, x, y, delta, depth);
  bool have_defect = depth <= 12;
  IsometryDeviation dev;
  if (have_defect) dev = isometry_defect(g, c.exec());
  if (c.json) {
    JsonValue root = JsonValue::object();
    root["delta"] = JsonValue(delta);
    root["depth"] = JsonValue(depth);
    root["base_distance"] = JsonValue(g.base_distance);
    JsonValue rows = JsonValue::array();
    for (std::size_t i = 0; i < g.points.size(); ++i) {
      JsonValue row = JsonValue::object();
      row["t"] = JsonValue(g.schedule.endpoints[i]);
      row["point"] = point_json(g.points[i]);
      rows.push_back(std::move(row));
    }
    root["samples"] = std::move(rows);
    if (have_defect) {
      root["max_defect"] = JsonValue(dev.max_defect);
      JsonValue worst = JsonValue::array();
      worst.push_back(JsonValue(dev.s));
      worst.push_back(JsonValue(dev.t));
      root["worst_pair"] = std::move(worst);
    }
    emit(c, root.dump(1));
  } else {
    std::ostringstream text;
    text << "t";
    for (int i = 0; i < desc.point_dim(); ++i) text << ",x" << i;
    text << "\n";
    for (std::size_t i = 0; i < g.points.size(); ++i) {
      text << format_real(g.schedule.endpoints[i]);
      for (double v : g.points[i]) text << ',' << format_real(v);
      text << "\n";
    }
    if (have_defect)
      text << "max isometry defect " << format_real(dev.max_defect) << "\n";
    emit(c, text.str());
  }
}

void cmd_dimension(const Common& c) {
  c.apply_threads();
  FiniteMetricSpace space = load(c);
  DimensionEstimate est =
      box_dimension(space, default_box_scales(space), c.exec());
  double diam = space.max_distance();
  DoublingEstimate dbl = doubling_constant(
      space, {diam / 2.0, diam / 4.0, diam / 8.0}, 64, c.seed, c.exec());
  if (c.json) {
    JsonValue root = JsonValue::object();
    root["slope"] = JsonValue(est.slope);
    root["residual"] = JsonValue(est.residual);
    JsonValue recs = JsonValue::array();
    for (const BoxCountRecord& r : est.records) {
      JsonValue jr = JsonValue::object();
      jr["scale"] = JsonValue(r.scale);
      jr["count"] = JsonValue(r.count);
      recs.push_back(std::move(jr));
    }
    root["records"] = std::move(recs);
    JsonValue jd = JsonValue::object();
    jd["c_hat"] = JsonValue(dbl.c_hat);
    jd["centers_tested"] = JsonValue(dbl.centers_tested);
    root["doubling"] = std::move(jd);
    emit(c, root.dump(1));
  } else {
    std::ostringstream text;
    text << "box dimension " << format_real(est.slope) << " (rms residual "
         << format_real(est.residual) << ")\n";
    for (const BoxCountRecord& r : est.records)
      text << "  r = " << format_real(r.scale) << "  N = " << r.count << "\n";
    text << "doubling constant <= " << dbl.c_hat << " over "
         << dbl.centers_tested << " centers\n";
    emit(c, text.str());
  }
}

void cmd_spheres(const Common& c, PointId center, const std::string& radii_arg,
                 double gap_tol) {
  c.apply_threads();
  FiniteMetricSpace space = load(c);
  const PointId n = static_cast<PointId>(space.size());
  if (center < 0 || center >= n)
    throw std::runtime_error("spheres: center out of range");
  double max_d = 0.0;
  for (PointId z = 0; z < n; ++z)
    max_d = std::max(max_d, space(center, z));
  std::vector<double> radii;
  if (radii_arg.rfind("auto:", 0) == 0) {
    int k = std::stoi(radii_arg.substr(5));
    if (k < 2) throw std::runtime_error("spheres: auto radius count must "
                                        "be >= 2");
    for (int i = 0; i < k; ++i) radii.push_back(max_d * i / (k - 1));
  } else {
    std::stringstream ss(radii_arg);
    std::string item;
    while (std::getline(ss, item, ',')) radii.push_back(std::stod(item));
  }
  if (gap_tol < 0.0) gap_tol = max_d / 32.0;
  auto gaps = sphere_surjectivity(space, center, radii, gap_tol);
  if (c.json) {
    JsonValue root = JsonValue::object();
    root["center"] = JsonValue(static_cast<std::int64_t>(center));
    root["gap_tol"] = JsonValue(gap_tol);
    JsonValue rows = JsonValue::array();
    for (const SphereGap& g : gaps) {
      JsonValue row = JsonValue::object();
      row["radius"] = JsonValue(g.radius);
      row["gap"] = JsonValue(g.gap);
      row["within"] = JsonValue(g.within);
      rows.push_back(std::move(row));
    }
    root["gaps"] = std::move(rows);
    emit(c, root.dump(1));
  } else {
    std::ostringstream text;
    text << "radius,gap,within\n";
    for (const SphereGap& g : gaps)
      text << format_real(g.radius) << ',' << format_real(g.gap) << ','
           << (g.within ? 1 : 0) << "\n";
    emit(c, text.str());
  }
}

void cmd_report(const Common& c, const std::string& spec, std::size_t count,
                std::size_t pairs) {
  c.apply_threads();
  FiniteMetricSpace space;
  std::string name;
  if (!spec.empty()) {
    SpaceDescriptor desc = parse_space_spec(spec);
    space = materialize(sample(desc, count, c.seed));
    name = desc.to_string();
  } else if (!c.in.empty()) {
    space = load(c);
    name = c.in;
  } else {
    throw std::runtime_error("report: need --in or --space");
  }
  ReportOptions opts;
  opts.tol = c.tol;
  opts.seed = c.seed;
  opts.pair_budget = pairs;
  opts.exec = c.exec();
  AnalysisReport rep = run_report(space, name, opts);
  if (c.json) {
    emit(c, report_to_json(rep).dump(1));
  } else {
    std::ostringstream text;
    text << "input: " << rep.input << " (" << rep.points << " points)\n";
    text << "metric: " << (rep.metric_valid ? "valid" : "INVALID") << "\n";
    if (rep.p_star) {
      if (std::isinf(*rep.p_star))
        text << "p_star: +inf\n";
      else
        text << "p_star: " << format_real(*rep.p_star) << "\n";
    }
    text << "between-points: " << rep.between_count << " (tolerance "
         << format_real(rep.between_tol) << ")\n";
    if (rep.nonconvexity)
      text << "uniform non-convexity: "
           << (rep.nonconvexity->certified ? "certified at delta = "
               : "refuted at delta = ")
           << format_real(rep.nonconvexity->delta) << "\n";
    if (rep.dimension)
      text << "box dimension: " << format_real(rep.dimension->slope)
           << " (residual " << format_real(rep.dimension->residual) << ")\n";
    text << "conclusion: " << conclusion_tag_name(rep.tag);
    if (rep.tag == ConclusionTag::SnowflakeLike && rep.p_star)
      text << "(p_star = " << format_real(*rep.p_star) << ")";
    text << "\n";
    emit(c, text.str());
  }
  g_exit = report_exit_code(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snowprobe: snowflake structure analysis for finite metric "
               "spaces"};
  app.require_subcommand(1);

  Common c_gen, c_val, c_exp, c_gauge, c_btw, c_ncx, c_chn, c_geo, c_dim,
      c_sph, c_rep;
  std::string gen_spec;
  std::size_t gen_count = 100;
  auto* gen = app.add_subcommand("generate",
                                 "sample a descriptor space to a JSON file");
  gen->add_option("--space", gen_spec, "space spec, e.g. "
                  "snowflake(euclidean:2,0.5)")->required();
  gen->add_option("--count", gen_count, "number of points");
  add_common(gen, c_gen, false);
  gen->callback([&] { cmd_generate(c_gen, gen_spec, gen_count); });

  auto* val = app.add_subcommand("validate", "check the metric axioms");
  add_common(val, c_val, true);
  val->callback([&] { cmd_validate(c_val); });

  auto* exp = app.add_subcommand("exponent",
                                 "maximal de-snowflaking exponent p*");
  add_common(exp, c_exp, true);
  c_exp.tol = 1e-12;
  exp->callback([&] { cmd_exponent(c_exp); });

  PointId gauge_a = 0, gauge_b = 1;
  double gauge_pmin = 1.0, gauge_pmax = 6.0;
  int gauge_steps = 51;
  auto* gau = app.add_subcommand("gauge", "scan the pair gauge phi(p)");
  gau->add_option("--a", gauge_a, "first anchor index");
  gau->add_option("--b", gauge_b, "second anchor index");
  gau->add_option("--pmin", gauge_pmin, "scan start");
  gau->add_option("--pmax", gauge_pmax, "scan end");
  gau->add_option("--steps", gauge_steps, "grid size");
  add_common(gau, c_gauge, true);
  gau->callback([&] {
    cmd_gauge(c_gauge, gauge_a, gauge_b, gauge_pmin, gauge_pmax, gauge_steps);
  });

  std::size_t btw_limit = 100;
  auto* btw = app.add_subcommand("between", "approximate between-points");
  btw->add_option("--limit", btw_limit, "max certificates to print");
  add_common(btw, c_btw, true);
  btw->callback([&] { cmd_between(c_btw, btw_limit); });

  std::size_t ncx_pairs = 2000, ncx_limit = 100;
  std::vector<double> ncx_deltas;
  auto* ncx = app.add_subcommand("nonconvexity",
                                 "uniform non-convexity certificate search");
  ncx->add_option("--pairs", ncx_pairs, "pair budget");
  ncx->add_option("--delta", ncx_deltas, "explicit delta grid values");
  ncx->add_option("--limit", ncx_limit, "max pair entries to print");
  add_common(ncx, c_ncx, true);
  ncx->callback(
      [&] { cmd_nonconvexity(c_ncx, ncx_pairs, ncx_deltas, ncx_limit); });

  std::string chn_spec, chn_from, chn_mid, chn_to;
  double chn_p = 4.0;
  int chn_depth = 10;
  auto* chn = app.add_subcommand("chains",
                                 "chain refinement p-length recursion");
  chn->add_option("--space", chn_spec, "descriptor space spec")->required();
  chn->add_option("--p", chn_p, "length exponent");
  chn->add_option("--depth", chn_depth, "max refinement depth")
      ->check(CLI::Range(0, 20));
  chn->add_option("--from", chn_from, "chain start, comma coordinates");
  chn->add_option("--mid", chn_mid, "base triple through point");
  chn->add_option("--to", chn_to, "chain end");
  add_common(chn, c_chn, false);
  chn->callback([&] {
    cmd_chains(c_chn, chn_spec, chn_p, chn_depth, chn_from, chn_mid, chn_to);
  });

  std::string geo_spec = "euclidean:2", geo_from = "0,0", geo_to = "1,1";
  double geo_delta = 1.0 / 3.0;
  int geo_depth = 8;
  auto* geo = app.add_subcommand("geodesic",
                                 "dyadic geodesic construction");
  geo->add_option("--space", geo_spec, "descriptor space spec");
  geo->add_option("--from", geo_from, "start point");
  geo->add_option("--to", geo_to, "end point");
  geo->add_option("--delta", geo_delta, "split ratio in (0,1)");
  geo->add_option("--depth", geo_depth, "schedule depth")
      ->check(CLI::Range(0, 20));
  add_common(geo, c_geo, false);
  geo->callback([&] {
    cmd_geodesic(c_geo, geo_spec, geo_from, geo_to, geo_delta, geo_depth);
  });

  auto* dim = app.add_subcommand("dimension",
                                 "box-counting dimension and doubling");
  add_common(dim, c_dim, true);
  dim->callback([&] { cmd_dimension(c_dim); });

  PointId sph_center = 0;
  std::string sph_radii = "auto:64";
  double sph_gap_tol = -1.0;
  auto* sph = app.add_subcommand("spheres",
                                 "distance sphere surjectivity gaps");
  sph->add_option("--center", sph_center, "center point index");
  sph->add_option("--radii", sph_radii, "comma list or auto:K");
  sph->add_option("--gap-tol", sph_gap_tol,
                  "gap threshold (default diameter/32)");
  add_common(sph, c_sph, true);
  sph->callback(
      [&] { cmd_spheres(c_sph, sph_center, sph_radii, sph_gap_tol); });

  std::string rep_spec;
  std::size_t rep_count = 200, rep_pairs = 2000;
  auto* rep = app.add_subcommand("report", "full analysis pipeline");
  rep->add_option("--space", rep_spec,
                  "generate this descriptor space instead of reading --in");
  rep->add_option("--count", rep_count, "sample size for --space");
  rep->add_option("--pairs", rep_pairs, "non-convexity pair budget");
  add_common(rep, c_rep, false);
  rep->add_option("--in", c_rep.in, "input space file (.json or .csv)");
  rep->callback([&] { cmd_report(c_rep, rep_spec, rep_count, rep_pairs); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const SpecParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return g_exit;
}
