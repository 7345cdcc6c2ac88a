#include <benchmark/benchmark.h>

#include <cmath>

#include "zk3d/diagnostics.hpp"
#include "zk3d/etd.hpp"
#include "zk3d/ground_state.hpp"
#include "zk3d/spectral.hpp"

using namespace zk3d;

namespace {

Grid cube(std::size_t n) { return make_grid({n, n, n}, {3.0, 3.0, 3.0}); }

RealField gaussian(const Grid& g) {
  return RealField::sample(g, [](double x, double y, double z) { return 2.0 * std::exp(-(x * x + y * y + z * z)); });
}

void BM_ForwardTransform(benchmark::State& state) {
  const Grid g = cube(static_cast<std::size_t>(state.range(0)));
  const RealField u = gaussian(g);
  SpectralField uh(g);
  for (auto _ : state) {
    forward_transform_into(u, uh);
    benchmark::DoNotOptimize(uh.data());
  }
}
BENCHMARK(BM_ForwardTransform)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_InverseTransform(benchmark::State& state) {
  const Grid g = cube(static_cast<std::size_t>(state.range(0)));
  const SpectralField uh = forward_transform(gaussian(g));
  RealField u(g);
  for (auto _ : state) {
    SpectralField scratch = uh;
    inverse_transform_into(scratch, u);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_InverseTransform)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_EtdWeights(benchmark::State& state) {
  const Grid g = cube(static_cast<std::size_t>(state.range(0)));
  const LinearSymbol sym = linear_symbol(g, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(make_weights(sym, 1e-3).e.data());
}
BENCHMARK(BM_EtdWeights)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Etdrk4Step(benchmark::State& state) {
  const Grid g = cube(static_cast<std::size_t>(state.range(0)));
  const EtdWeights w = make_weights(linear_symbol(g, 1.0), 1e-3);
  SpectralField uh = forward_transform(gaussian(g));
  for (auto _ : state) {
    uh = etdrk4_step(uh, w, state.range(1) != 0);
    benchmark::DoNotOptimize(uh.data());
  }
}
BENCHMARK(BM_Etdrk4Step)->Args({32, 0})->Args({64, 0})->Args({64, 1})->Unit(benchmark::kMillisecond);

void BM_JacobianApply(benchmark::State& state) {
  const Grid g = cube(static_cast<std::size_t>(state.range(0)));
  const SpectralField qh = forward_transform(gaussian(g));
  const SpectralField vh = forward_transform(RealField::sample(g, [](double x, double y, double z) {
    return std::sin(x) * std::cos(y) * std::exp(-z * z);
  }));
  for (auto _ : state) benchmark::DoNotOptimize(gs_jacobian_apply(qh, vh, 1.0).data());
}
BENCHMARK(BM_JacobianApply)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_InterpolatedPeak(benchmark::State& state) {
  const Grid g = cube(static_cast<std::size_t>(state.range(0)));
  const RealField u = translate(gaussian(g), Vec3{0.03, -0.02, 0.01});
  for (auto _ : state) benchmark::DoNotOptimize(interpolated_peak(u).value);
}
BENCHMARK(BM_InterpolatedPeak)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
