// Optimized vs reference kernels, and serial vs parallel evolution.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "pixelstorm/attack.hpp"
#include "pixelstorm/fixture.hpp"
#include "pixelstorm/kernels.hpp"
#include "random_cases.hpp"
#include "reference_kernels.hpp"

using namespace pixelstorm;

namespace {

Conv2D conv_layer(int cin, int depth, Rng& rng) {
  Conv2D c = reference::random_conv(cin, rng);
  c.kernel = 3;
  c.stride = 1;
  c.depth = depth;
  c.padding = Padding::same;
  c.weights.resize(static_cast<std::size_t>(9 * cin * depth));
  c.bias.resize(static_cast<std::size_t>(depth));
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (auto& w : c.weights) w = u(rng);
  for (auto& b : c.bias) b = u(rng);
  return c;
}

void BM_Conv2dOptimized(benchmark::State& state) {
  Rng rng(1);
  const int side = static_cast<int>(state.range(0));
  const Conv2D c = conv_layer(16, 32, rng);
  const Tensor in = reference::random_tensor(Shape{side, side, 16}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::conv2d(in, c));
  state.SetItemsProcessed(state.iterations() * side * side * 9 * 16 * 32);
}

void BM_Conv2dReference(benchmark::State& state) {
  Rng rng(1);
  const int side = static_cast<int>(state.range(0));
  const Conv2D c = conv_layer(16, 32, rng);
  const Tensor in = reference::random_tensor(Shape{side, side, 16}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(reference::conv2d(in, c));
  state.SetItemsProcessed(state.iterations() * side * side * 9 * 16 * 32);
}

void BM_DenseOptimized(benchmark::State& state) {
  Rng rng(2);
  const int n = static_cast<int>(state.range(0));
  const Dense d = reference::random_dense(n, 256, rng);
  const Tensor in = reference::random_tensor(Shape{1, 1, n}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dense(in, d));
  state.SetItemsProcessed(state.iterations() * n * 256);
}

void BM_DenseReference(benchmark::State& state) {
  Rng rng(2);
  const int n = static_cast<int>(state.range(0));
  const Dense d = reference::random_dense(n, 256, rng);
  const Tensor in = reference::random_tensor(Shape{1, 1, n}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(reference::dense(in, d));
  state.SetItemsProcessed(state.iterations() * n * 256);
}

void BM_MaxPoolOptimized(benchmark::State& state) {
  Rng rng(3);
  const Tensor in = reference::random_tensor(Shape{64, 64, 32}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::max_pool(in, MaxPool{2, 2}));
}

void BM_MaxPoolReference(benchmark::State& state) {
  Rng rng(3);
  const Tensor in = reference::random_tensor(Shape{64, 64, 32}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(reference::max_pool(in, 2, 2));
}

// One fixture attack; range(0) is the number of workers evaluating children.
void BM_FixtureAttack(benchmark::State& state) {
  ModelOracle oracle(make_fixture_model());
  const Image img = make_fixture_image(1, 4);
  AttackConfig c;
  c.spec = de::parse_variant("0.5/0.1/0.1");
  c.spec.max_generations = 20;
  c.spec.rng_seed = 3;
  c.stop_on_flip = false;
  c.workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(attack_image(img, "b", oracle, c));
}

}  // namespace

BENCHMARK(BM_Conv2dOptimized)->Arg(16)->Arg(32);
BENCHMARK(BM_Conv2dReference)->Arg(16)->Arg(32);
BENCHMARK(BM_DenseOptimized)->Arg(512)->Arg(4096);
BENCHMARK(BM_DenseReference)->Arg(512)->Arg(4096);
BENCHMARK(BM_MaxPoolOptimized);
BENCHMARK(BM_MaxPoolReference);
BENCHMARK(BM_FixtureAttack)->Arg(1)->Arg(omp_get_num_procs())->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
