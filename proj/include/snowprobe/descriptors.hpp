#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "snowprobe/metric_space.hpp"

namespace snowprobe {

// Coordinate vector for the normed kinds, 0/1 slots (window [-N, N], index
// n stored at n + N) for the sequence kind.
using Point = std::vector<double>;

struct SpaceDescriptor {
  enum class Kind { Euclidean, Normed, Snowflaked, MixedProduct, ShiftSpace };

  Kind kind = Kind::Euclidean;
  int dim = 0;                  // euclidean / normed
  double norm_q = 2.0;          // normed: q >= 1, +inf means sup-norm
  std::shared_ptr<SpaceDescriptor> base;  // snowflaked
  double epsilon = 1.0;         // snowflaked, in (0, 1]
  std::vector<double> mixed_exponents;    // mixed product, each in (0, 1]
  int window = 0;               // shift space: N >= 1

  static SpaceDescriptor euclidean(int n);
  static SpaceDescriptor normed(int n, double q);
  // Nested snowflakes normalize: snowflaked(snowflaked(S,e1),e2) becomes
  // snowflaked(S, e1*e2), and eps = 1 collapses to the base.
  static SpaceDescriptor snowflaked(SpaceDescriptor base, double eps);
  static SpaceDescriptor mixed_product(std::vector<double> exponents);
  static SpaceDescriptor shift_space(int window);

  // Coordinates per stored point (2N+1 for the sequence kind).
  int point_dim() const;
  bool is_shift() const { return kind == Kind::ShiftSpace; }
  std::string to_string() const;
};

double distance(const SpaceDescriptor& desc, const Point& x, const Point& y);

// Norm of a single vector; only the euclidean/normed kinds have one.
double norm_of(const SpaceDescriptor& desc, const Point& v);

std::string point_label(const SpaceDescriptor& desc, const Point& p);

struct SampleSet {
  SpaceDescriptor space;
  std::vector<Point> points;
  std::uint64_t seed = 0;
};

// Deterministic given (desc, count, seed): coordinates uniform in [0,1) per
// axis, independent fair bits per window slot. Duplicate draws are rejected
// and re-drawn up to a retry cap.
SampleSet sample(const SpaceDescriptor& desc, std::size_t count,
                 std::uint64_t seed);

// Distance matrix via distance(); labels record point data.
FiniteMetricSpace materialize(const SampleSet& samples);

struct MapStep {
  enum class Kind { Translation, Linear, CoordinateDilation, Shift };
  Kind kind;
  std::vector<double> vec;                 // translation / dilation factors
  std::vector<std::vector<double>> mat;    // linear
  int shift_steps = 0;
};

struct MapDescriptor {
  std::vector<MapStep> steps;  // applied in order
  double claimed_factor = 1.0;

  static MapDescriptor translation(std::vector<double> v);
  static MapDescriptor linear(std::vector<std::vector<double>> m,
                              double claimed_factor = 1.0);
  static MapDescriptor coordinate_dilation(std::vector<double> factors,
                                           double claimed_factor);
  static MapDescriptor shift(int steps);

  // Composition: apply *this first, then next; factors multiply.
  MapDescriptor then(const MapDescriptor& next) const;
};

// nullopt when a shifted sequence would lose nonzero entries past the window
// edge; such points are skipped by verify_map.
std::optional<Point> apply_map(const MapDescriptor& map,
                               const SpaceDescriptor& desc, const Point& p);

// Max over sampled pairs of |d(f(x),f(y)) - lambda d(x,y)| / (lambda d(x,y)).
// skipped (if given) counts sample points the map is undefined at.
double verify_map(const SpaceDescriptor& desc, const MapDescriptor& map,
                  const SampleSet& samples, std::size_t* skipped = nullptr);

// Similarity sending (x,y) to (x2,y2), composed from translation, reflection
// and uniform dilation pieces; claimed factor is the descriptor-metric ratio
// d(x2,y2)/d(x,y). Euclidean-like descriptors only.
MapDescriptor pair_to_pair_similarity(const SpaceDescriptor& desc,
                                      const Point& x, const Point& y,
                                      const Point& x2, const Point& y2);

struct ParallelogramResult {
  double max_defect = 0.0;
  PointId u = -1;
  PointId v = -1;
};

// Max over sampled pairs of the parallelogram-law defect
// |(u+v)^2 + (u-v)^2 - 2u^2 - 2v^2| / (2u^2 + 2v^2) in the given norm;
// zero is necessary for the norm to come from a scalar product.
ParallelogramResult parallelogram_defect(const SpaceDescriptor& norm_desc,
                                         const SampleSet& samples);

}  // namespace snowprobe
