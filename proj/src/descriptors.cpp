#include "snowprobe/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "snowprobe/rng.hpp"

namespace snowprobe {

namespace {

std::string format_coord(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_point(const SpaceDescriptor& desc, const Point& p,
                 const char* who) {
  if (static_cast<int>(p.size()) != desc.point_dim())
    throw std::invalid_argument(std::string(who) +
                                ": point dimension mismatch");
  if (desc.is_shift()) {
    for (double b : p)
      if (b != 0.0 && b != 1.0)
        throw std::invalid_argument(std::string(who) +
                                    ": sequence entries must be 0 or 1");
  }
}

}  // namespace

SpaceDescriptor SpaceDescriptor::euclidean(int n) {
  require(n >= 1, "euclidean: dimension must be >= 1");
  SpaceDescriptor d;
  d.kind = Kind::Euclidean;
  d.dim = n;
  return d;
}

SpaceDescriptor SpaceDescriptor::normed(int n, double q) {
  require(n >= 1, "normed: dimension must be >= 1");
  require(q >= 1.0, "normed: exponent must be >= 1");
  SpaceDescriptor d;
  d.kind = Kind::Normed;
  d.dim = n;
  d.norm_q = q;
  return d;
}

SpaceDescriptor SpaceDescriptor::snowflaked(SpaceDescriptor base, double eps) {
  require(eps > 0.0 && eps <= 1.0, "snowflaked: exponent must be in (0, 1]");
  if (base.kind == Kind::Snowflaked) {
    double combined = base.epsilon * eps;
    SpaceDescriptor inner = *base.base;
    return snowflaked(std::move(inner), combined);
  }
  if (eps == 1.0) return base;
  SpaceDescriptor d;
  d.kind = Kind::Snowflaked;
  d.base = std::make_shared<SpaceDescriptor>(std::move(base));
  d.epsilon = eps;
  d.dim = d.base->dim;
  return d;
}

SpaceDescriptor SpaceDescriptor::mixed_product(std::vector<double> exponents) {
  require(!exponents.empty(), "mixed_product: need at least one factor");
  for (double e : exponents)
    require(e > 0.0 && e <= 1.0,
            "mixed_product: every exponent must be in (0, 1]");
  SpaceDescriptor d;
  d.kind = Kind::MixedProduct;
  d.mixed_exponents = std::move(exponents);
  d.dim = static_cast<int>(d.mixed_exponents.size());
  return d;
}

SpaceDescriptor SpaceDescriptor::shift_space(int window) {
  require(window >= 1, "shift_space: window must be >= 1");
  SpaceDescriptor d;
  d.kind = Kind::ShiftSpace;
  d.window = window;
  return d;
}

int SpaceDescriptor::point_dim() const {
  switch (kind) {
    case Kind::Euclidean:
    case Kind::Normed:
    case Kind::MixedProduct:
      return dim;
    case Kind::Snowflaked:
      return base->point_dim();
    case Kind::ShiftSpace:
      return 2 * window + 1;
  }
  return 0;
}

std::string SpaceDescriptor::to_string() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Euclidean:
      out << "euclidean:" << dim;
      break;
    case Kind::Normed:
      out << "normed:" << dim << ':';
      if (std::isinf(norm_q))
        out << "inf";
      else
        out << format_coord(norm_q);
      break;
    case Kind::Snowflaked:
      out << "snowflake(" << base->to_string() << ','
          << format_coord(epsilon) << ')';
      break;
    case Kind::MixedProduct: {
      out << "mixed(";
      for (std::size_t i = 0; i < mixed_exponents.size(); ++i) {
        if (i) out << ',';
        out << format_coord(mixed_exponents[i]);
      }
      out << ')';
      break;
    }
    case Kind::ShiftSpace:
      out << "shift:" << window;
      break;
  }
  return out.str();
}

double norm_of(const SpaceDescriptor& desc, const Point& v) {
  if (desc.kind != SpaceDescriptor::Kind::Euclidean &&
      desc.kind != SpaceDescriptor::Kind::Normed)
    throw std::invalid_argument("norm_of: descriptor has no norm");
  if (static_cast<int>(v.size()) != desc.dim)
    throw std::invalid_argument("norm_of: dimension mismatch");
  double q = desc.kind == SpaceDescriptor::Kind::Euclidean ? 2.0 : desc.norm_q;
  if (std::isinf(q)) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::fabs(c));
    return m;
  }
  if (q == 2.0) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
  }
  if (q == 1.0) {
    double s = 0.0;
    for (double c : v) s += std::fabs(c);
    return s;
  }
  double s = 0.0;
  for (double c : v) s += std::pow(std::fabs(c), q);
  return std::pow(s, 1.0 / q);
}

double distance(const SpaceDescriptor& desc, const Point& x, const Point& y) {
  check_point(desc, x, "distance");
  check_point(desc, y, "distance");
  switch (desc.kind) {
    case SpaceDescriptor::Kind::Euclidean:
    case SpaceDescriptor::Kind::Normed: {
      Point diff(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y[i];
      return norm_of(desc, diff);
    }
    case SpaceDescriptor::Kind::Snowflaked: {
      double base_d = distance(*desc.base, x, y);
      if (base_d == 0.0) return 0.0;
      return std::pow(base_d, desc.epsilon);
    }
    case SpaceDescriptor::Kind::MixedProduct: {
      double s = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        double a = std::fabs(x[k] - y[k]);
        double e = desc.mixed_exponents[k];
        s += (e == 1.0 || a == 0.0) ? a : std::pow(a, e);
      }
      return s;
    }
    case SpaceDescriptor::Kind::ShiftSpace: {
      // d = 2^m where m is the largest index at which the sequences differ,
      // indices running over [-N, N]; identical sequences are at distance 0.
      for (int i = static_cast<int>(x.size()) - 1; i >= 0; --i) {
        if (x[i] != y[i]) return std::ldexp(1.0, i - desc.window);
      }
      return 0.0;
    }
  }
  throw std::logic_error("distance: unhandled descriptor kind");
}

std::string point_label(const SpaceDescriptor& desc, const Point& p) {
  if (desc.is_shift()) {
    std::string s;
    s.reserve(p.size());
    for (double b : p) s.push_back(b == 0.0 ? '0' : '1');
    return s;
  }
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += format_coord(p[i]);
  }
  s += ')';
  return s;
}

SampleSet sample(const SpaceDescriptor& desc, std::size_t count,
                 std::uint64_t seed) {
  SampleSet out;
  out.space = desc;
  out.seed = seed;
  if (count == 0) return out;

  const int dim = desc.point_dim();
  const bool bits = desc.is_shift();
  if (bits) {
    std::uint64_t distinct = 1;
    for (int i = 0; i < dim && distinct <= count; ++i) distinct *= 2;
    if (distinct < count)
      throw std::invalid_argument(
          "sample: window too small for that many distinct sequences");
  }

  SplitMix64 rng(seed);
  std::set<Point> seen;
  const std::size_t max_draws = 100 * count + 1000;
  std::size_t draws = 0;
  out.points.reserve(count);
  while (out.points.size() < count) {
    if (draws++ >= max_draws)
      throw std::runtime_error("sample: retry cap hit while rejecting "
                               "duplicate points");
    Point p(dim);
    if (bits) {
      for (int i = 0; i < dim; ++i) p[i] = rng.next_bit() ? 1.0 : 0.0;
    } else {
      for (int i = 0; i < dim; ++i) p[i] = rng.next_unit();
    }
    if (seen.insert(p).second) out.points.push_back(std::move(p));
  }
  return out;
}

FiniteMetricSpace materialize(const SampleSet& samples) {
  const std::size_t n = samples.points.size();
  std::set<Point> seen;
  for (const Point& p : samples.points) {
    check_point(samples.space, p, "materialize");
    if (!seen.insert(p).second)
      throw std::invalid_argument("materialize: duplicate point in sample "
                                  "set");
  }
  std::vector<double> m(n * n, 0.0);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = point_label(samples.space, samples.points[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = distance(samples.space, samples.points[i], samples.points[j]);
      m[i * n + j] = d;
      m[j * n + i] = d;
    }
  }
  return FiniteMetricSpace(std::move(m), static_cast<std::size_t>(n),
                           std::move(labels));
}

MapDescriptor MapDescriptor::translation(std::vector<double> v) {
  MapStep s;
  s.kind = MapStep::Kind::Translation;
  s.vec = std::move(v);
  MapDescriptor m;
  m.steps.push_back(std::move(s));
  m.claimed_factor = 1.0;
  return m;
}

MapDescriptor MapDescriptor::linear(std::vector<std::vector<double>> mat,
                                    double claimed_factor) {
  require(!mat.empty(), "linear: empty matrix");
  for (const auto& row : mat)
    require(row.size() == mat.size(), "linear: matrix must be square");
  MapStep s;
  s.kind = MapStep::Kind::Linear;
  s.mat = std::move(mat);
  MapDescriptor m;
  m.steps.push_back(std::move(s));
  m.claimed_factor = claimed_factor;
  return m;
}

MapDescriptor MapDescriptor::coordinate_dilation(std::vector<double> factors,
                                                 double claimed_factor) {
  require(!factors.empty(), "coordinate_dilation: empty factor list");
  MapStep s;
  s.kind = MapStep::Kind::CoordinateDilation;
  s.vec = std::move(factors);
  MapDescriptor m;
  m.steps.push_back(std::move(s));
  m.claimed_factor = claimed_factor;
  return m;
}

MapDescriptor MapDescriptor::shift(int steps) {
  MapStep s;
  s.kind = MapStep::Kind::Shift;
  s.shift_steps = steps;
  MapDescriptor m;
  m.steps.push_back(std::move(s));
  m.claimed_factor = std::ldexp(1.0, steps);
  return m;
}

MapDescriptor MapDescriptor::then(const MapDescriptor& next) const {
  MapDescriptor m;
  m.steps = steps;
  m.steps.insert(m.steps.end(), next.steps.begin(), next.steps.end());
  m.claimed_factor = claimed_factor * next.claimed_factor;
  return m;
}

namespace {

std::optional<Point> apply_step(const MapStep& step,
                                const SpaceDescriptor& desc, Point p) {
  const bool coords = !desc.is_shift();
  switch (step.kind) {
    case MapStep::Kind::Translation: {
      require(coords, "apply_map: translation needs a coordinate space");
      require(step.vec.size() == p.size(),
              "apply_map: translation dimension mismatch");
      for (std::size_t i = 0; i < p.size(); ++i) p[i] += step.vec[i];
      return p;
    }
    case MapStep::Kind::Linear: {
      require(coords, "apply_map: linear map needs a coordinate space");
      require(step.mat.size() == p.size(),
              "apply_map: matrix dimension mismatch");
      Point out(p.size(), 0.0);
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
          out[i] += step.mat[i][j] * p[j];
      return out;
    }
    case MapStep::Kind::CoordinateDilation: {
      require(coords, "apply_map: dilation needs a coordinate space");
      require(step.vec.size() == p.size(),
              "apply_map: dilation dimension mismatch");
      for (std::size_t i = 0; i < p.size(); ++i) p[i] *= step.vec[i];
      return p;
    }
    case MapStep::Kind::Shift: {
      require(desc.is_shift(), "apply_map: shift needs a sequence space");
      const int len = static_cast<int>(p.size());
      const int s = step.shift_steps;
      Point out(p.size(), 0.0);
      for (int i = 0; i < len; ++i) {
        int src = i - s;
        double bit = (src >= 0 && src < len) ? p[src] : 0.0;
        out[i] = bit;
      }
      // Any 1-bit pushed past the window edge is lost, so the shifted
      // sequence would not be the true image; report the map undefined here.
      for (int i = 0; i < len; ++i) {
        int dst = i + s;
        if ((dst < 0 || dst >= len) && p[i] != 0.0) return std::nullopt;
      }
      return out;
    }
  }
  throw std::logic_error("apply_map: unhandled step kind");
}

}  // namespace

std::optional<Point> apply_map(const MapDescriptor& map,
                               const SpaceDescriptor& desc, const Point& p) {
  check_point(desc, p, "apply_map");
  Point cur = p;
  for (const MapStep& step : map.steps) {
    auto next = apply_step(step, desc, std::move(cur));
    if (!next) return std::nullopt;
    cur = std::move(*next);
  }
  return cur;
}

double verify_map(const SpaceDescriptor& desc, const MapDescriptor& map,
                  const SampleSet& samples, std::size_t* skipped) {
  const std::size_t n = samples.points.size();
  if (n < 2)
    throw std::invalid_argument("verify_map: need at least two sample "
                                "points");
  std::vector<std::optional<Point>> image(n);
  std::size_t missing = 0;
  for (std::size_t i = 0; i < n; ++i) {
    image[i] = apply_map(map, desc, samples.points[i]);
    if (!image[i]) ++missing;
  }
  if (skipped) *skipped = missing;
  if (n - missing < 2)
    throw std::invalid_argument("verify_map: map undefined on too many "
                                "sample points");
  const double lambda = map.claimed_factor;
  require(lambda > 0.0, "verify_map: claimed factor must be positive");
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!image[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!image[j]) continue;
      double d = distance(desc, samples.points[i], samples.points[j]);
      if (d == 0.0) continue;
      double d_img = distance(desc, *image[i], *image[j]);
      worst = std::max(worst, std::fabs(d_img - lambda * d) / (lambda * d));
    }
  }
  return worst;
}

namespace {

const SpaceDescriptor& euclidean_core(const SpaceDescriptor& desc) {
  const SpaceDescriptor* cur = &desc;
  if (cur->kind == SpaceDescriptor::Kind::Snowflaked) cur = cur->base.get();
  bool ok = cur->kind == SpaceDescriptor::Kind::Euclidean ||
            (cur->kind == SpaceDescriptor::Kind::Normed && cur->norm_q == 2.0);
  require(ok, "pair_to_pair_similarity: needs a euclidean base geometry");
  return *cur;
}

}  // namespace

MapDescriptor pair_to_pair_similarity(const SpaceDescriptor& desc,
                                      const Point& x, const Point& y,
                                      const Point& x2, const Point& y2) {
  const SpaceDescriptor& core = euclidean_core(desc);
  const std::size_t dim = static_cast<std::size_t>(core.dim);
  require(x.size() == dim && y.size() == dim && x2.size() == dim &&
              y2.size() == dim,
          "pair_to_pair_similarity: dimension mismatch");

  Point u(dim), v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    u[i] = y[i] - x[i];
    v[i] = y2[i] - x2[i];
  }
  double nu = norm_of(core, u);
  double nv = norm_of(core, v);
  require(nu > 0.0 && nv > 0.0,
          "pair_to_pair_similarity: pairs must be nondegenerate");

  // Householder reflection H w = w - 2 <w,r> r / <r,r> with r = u/|u| - v/|v|
  // sends the u direction to the v direction; near-parallel pairs keep the
  // identity instead.
  Point r(dim);
  double rr = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    r[i] = u[i] / nu - v[i] / nv;
    rr += r[i] * r[i];
  }
  std::vector<std::vector<double>> H(dim, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) H[i][i] = 1.0;
  if (rr > 1e-24) {
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        H[i][j] -= 2.0 * r[i] * r[j] / rr;
  }

  std::vector<double> neg_x(dim), scale(dim, nv / nu);
  for (std::size_t i = 0; i < dim; ++i) neg_x[i] = -x[i];

  MapDescriptor map = MapDescriptor::translation(neg_x)
                          .then(MapDescriptor::linear(H))
                          .then(MapDescriptor::coordinate_dilation(scale, 1.0))
                          .then(MapDescriptor::translation(x2));
  map.claimed_factor = distance(desc, x2, y2) / distance(desc, x, y);
  return map;
}

ParallelogramResult parallelogram_defect(const SpaceDescriptor& norm_desc,
                                         const SampleSet& samples) {
  if (norm_desc.kind != SpaceDescriptor::Kind::Euclidean &&
      norm_desc.kind != SpaceDescriptor::Kind::Normed)
    throw std::invalid_argument("parallelogram_defect: descriptor must carry "
                                "a norm");
  const std::size_t n = samples.points.size();
  if (n < 2)
    throw std::invalid_argument("parallelogram_defect: need at least two "
                                "vectors");
  ParallelogramResult res;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& u = samples.points[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point& v = samples.points[j];
      Point sum(u.size()), diff(u.size());
      for (std::size_t k = 0; k < u.size(); ++k) {
        sum[k] = u[k] + v[k];
        diff[k] = u[k] - v[k];
      }
      double nu = norm_of(norm_desc, u);
      double nv = norm_of(norm_desc, v);
      double rhs = 2.0 * nu * nu + 2.0 * nv * nv;
      if (rhs == 0.0) continue;
      double ns = norm_of(norm_desc, sum);
      double nd = norm_of(norm_desc, diff);
      double defect = std::fabs(ns * ns + nd * nd - rhs) / rhs;
      if (defect > res.max_defect) {
        res.max_defect = defect;
        res.u = static_cast<PointId>(i);
        res.v = static_cast<PointId>(j);
      }
    }
  }
  return res;
}

}  // namespace snowprobe
