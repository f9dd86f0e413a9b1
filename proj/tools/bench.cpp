#include <benchmark/benchmark.h>

#include "snowprobe/betweenness.hpp"
#include "snowprobe/descriptors.hpp"
#include "snowprobe/dimension.hpp"
#include "snowprobe/exponents.hpp"
#include "snowprobe/metric_space.hpp"

using namespace snowprobe;

namespace {

const FiniteMetricSpace& plane(std::size_t count) {
  static auto small = materialize(
      sample(SpaceDescriptor::euclidean(2), 160, 11));
  static auto medium = materialize(
      sample(SpaceDescriptor::euclidean(2), 400, 11));
  static auto large = materialize(
      sample(SpaceDescriptor::euclidean(2), 1000, 11));
  if (count <= 160) return small;
  if (count <= 400) return medium;
  return large;
}

void bench_validate(benchmark::State& state, Exec exec) {
  const auto& s = plane(400);
  ValidationOptions opts;
  opts.exec = exec;
  for (auto _ : state) benchmark::DoNotOptimize(validate_metric(s, opts));
}

void bench_exponent(benchmark::State& state, Exec exec) {
  const auto& s = plane(160);
  for (auto _ : state)
    benchmark::DoNotOptimize(desnowflake_exponent(s, 1e-12, exec));
}

void bench_between(benchmark::State& state, Exec exec) {
  const auto& s = plane(400);
  for (auto _ : state)
    benchmark::DoNotOptimize(find_between_points(s, 1e-3, exec));
}

void bench_box_dimension(benchmark::State& state, Exec exec) {
  const auto& s = plane(1000);
  auto scales = default_box_scales(s);
  for (auto _ : state)
    benchmark::DoNotOptimize(box_dimension(s, scales, exec));
}

}  // namespace

BENCHMARK_CAPTURE(bench_validate, serial, Exec::Serial);
BENCHMARK_CAPTURE(bench_validate, parallel, Exec::Parallel);
BENCHMARK_CAPTURE(bench_exponent, serial, Exec::Serial);
BENCHMARK_CAPTURE(bench_exponent, parallel, Exec::Parallel);
BENCHMARK_CAPTURE(bench_between, serial, Exec::Serial);
BENCHMARK_CAPTURE(bench_between, parallel, Exec::Parallel);
BENCHMARK_CAPTURE(bench_box_dimension, serial, Exec::Serial);
BENCHMARK_CAPTURE(bench_box_dimension, parallel, Exec::Parallel);

BENCHMARK_MAIN();
