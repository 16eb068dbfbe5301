#include <benchmark/benchmark.h>

#include "modspace/experiments.hpp"
#include "modspace/norms.hpp"
#include "modspace/phaseflow.hpp"
#include "modspace/splitstep.hpp"

using namespace modspace;

namespace {

SpinorField bench_field(const Grid& g, int m) {
  CounterRng rng(12);
  return random_band_limited_field(g, m, 1.0 / 3.0, rng);
}

void BM_GridDft(benchmark::State& state) {
  Grid g(1, static_cast<int>(state.range(0)), 25.0);
  SpinorField f = bench_field(g, 1);
  for (auto _ : state) {
    SpinorField out = forward_ft(f);
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_GridDft)->Arg(256)->Arg(1024)->Arg(4096);

void BM_WpTransform(benchmark::State& state) {
  Grid g(1, static_cast<int>(state.range(0)), 12.0);
  Window phi = Window::gaussian(g, 1.0);
  SpinorField f = bench_field(g, 2);
  for (auto _ : state) {
    PhaseSpaceField W = wp_transform(phi, f);
    benchmark::DoNotOptimize(W.data().data());
  }
  state.SetItemsProcessed(state.iterations() * g.size() * g.size());
}
BENCHMARK(BM_WpTransform)->Arg(64)->Arg(128);

void BM_ModNorms(benchmark::State& state) {
  Grid g(1, static_cast<int>(state.range(0)), 25.0);
  Window phi = Window::gaussian(g, 1.0);
  SpinorField f = bench_field(g, 2);
  const std::vector<NormSpec> specs = {
      {2, 2, 0, 0}, {kInf, 1, 0, 0}, {4, 2, 0, -1}};
  for (auto _ : state) {
    auto v = mod_norms(f, phi, specs);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_ModNorms)->Arg(256)->Arg(1024);

void BM_SplitStep(benchmark::State& state) {
  Grid g(1, 256, 25.0);
  CliffordSystem cs = CliffordSystem::preset("dirac1d", 1.0);
  SpinorField psi0 = gaussian_spinor(g, 2);
  PotentialSpec pot;
  pot.dim = 1;
  pot.components = 2;
  pot.quadratic = quadratic_preset("harmonic", 1, 1.0);
  EvolutionConfig c;
  c.dt = 1e-2;
  c.T = 0.1;  // ten steps per iteration
  for (auto _ : state) {
    SpinorField u = split_step_final(cs, pot, psi0, c);
    benchmark::DoNotOptimize(u.data().data());
  }
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_SplitStep);

void BM_RemainderR(benchmark::State& state) {
  Grid g(1, static_cast<int>(state.range(0)), 10.0);
  Window phi = Window::gaussian(g, 1.0);
  SpinorField u = bench_field(g, 2);
  PotentialSpec pot;
  pot.dim = 1;
  pot.components = 2;
  pot.quadratic = quadratic_preset("harmonic", 1, 1.0);
  for (auto _ : state) {
    PhaseSpaceField R = remainder_R(pot, phi, u, 0.0);
    benchmark::DoNotOptimize(R.data().data());
  }
}
BENCHMARK(BM_RemainderR)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
