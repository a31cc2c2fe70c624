#include <benchmark/benchmark.h>

#include "contactlab/exact_ctmc.hpp"
#include "contactlab/group.hpp"
#include "contactlab/rate_kernel.hpp"
#include "contactlab/simulator.hpp"

using namespace contactlab;

namespace {

ProcessParams params(const char* group, const char* kernel, double delta) {
  Group g = Group::parse(group);
  return ProcessParams(RateKernel::parse(g, kernel), delta);
}

void bm_event_loop_z(benchmark::State& state) {
  ProcessParams pp = params("Z", "nn(2)", 1.0);
  Configuration init;
  init.insert(pp.kernel.group().identity());
  Rng rng(7);
  for (auto _ : state) {
    SimResult r = simulate_forward(pp, init, 4.0, rng);
    benchmark::DoNotOptimize(r.state.size());
  }
}
BENCHMARK(bm_event_loop_z);

void bm_event_loop_f2(benchmark::State& state) {
  ProcessParams pp = params("F2", "nn(1)", 0.6);
  Configuration init;
  init.insert(pp.kernel.group().identity());
  Rng rng(7);
  for (auto _ : state) {
    SimResult r = simulate_forward(pp, init, 3.0, rng);
    benchmark::DoNotOptimize(r.state.size());
  }
}
BENCHMARK(bm_event_loop_f2);

void bm_ball_f2(benchmark::State& state) {
  Group g = Group::parse("F2");
  for (auto _ : state) {
    auto b = g.ball(static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(b.size());
  }
}
BENCHMARK(bm_ball_f2)->Arg(5)->Arg(7);

void bm_ball_lamplighter(benchmark::State& state) {
  Group g = Group::parse("lamplighter");
  for (auto _ : state) {
    auto b = g.ball(static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(b.size());
  }
}
BENCHMARK(bm_ball_lamplighter)->Arg(6)->Arg(8);

void bm_uniformization_c3(benchmark::State& state) {
  ProcessParams pp = params("C3", "nn(1)", 1.0);
  ExactProcess oracle(pp, 8);
  for (auto _ : state) {
    auto d = oracle.distribution(1, 1.0);
    benchmark::DoNotOptimize(d[0]);
  }
}
BENCHMARK(bm_uniformization_c3);

void bm_kernel_sampling(benchmark::State& state) {
  Group g = Group::parse("Z");
  RateKernel k = RateKernel::parse(g, "1:1,-1:1,2:0.5,-2:0.5,3:0.25,-3:0.25");
  Rng rng(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(&k.sample_offset(rng));
  }
}
BENCHMARK(bm_kernel_sampling);

}  // namespace

BENCHMARK_MAIN();
