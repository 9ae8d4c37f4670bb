#include <benchmark/benchmark.h>

#include <gsemm/dynamics.hpp>
#include <gsemm/energy.hpp>
#include <gsemm/integrate.hpp>
#include <gsemm/model.hpp>

using namespace gsemm;

namespace {

struct Setup {
  ModelSpec spec;
  SynapseState syn;
  NetworkState state;

  Setup(Variant v, Index n_f, Index k) {
    spec = v == Variant::LISEM ? ModelSpec::lisem(n_f, k) : ModelSpec::dsem(n_f, k);
    std::vector<Index> cycle(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) cycle[static_cast<std::size_t>(i)] = i;
    const Matrix m = generate_memories(n_f, k, 1);
    syn = preload(m, build_episode_graph({cycle}), spec.alpha_s);
    state = init_from_cue(m.col(0), 0.1, 2, spec, syn, DelayInit::Matched);
  }
};

Variant variant_of(const benchmark::State& st) { return st.range(0) ? Variant::DSEM : Variant::LISEM; }

void BM_Rhs(benchmark::State& st) {
  const Setup s(variant_of(st), st.range(1), 8);
  for (auto _ : st) benchmark::DoNotOptimize(model_rhs(s.state, s.syn, s.spec));
}

void BM_Rk4Step(benchmark::State& st) {
  const Setup s(variant_of(st), st.range(1), 8);
  const RhsFn rhs = [&](const NetworkState& x) {
    return model_rhs(with_derived_hidden(x, s.syn, s.spec), s.syn, s.spec);
  };
  for (auto _ : st) benchmark::DoNotOptimize(rk4_step(rhs, s.state, 0.01));
}

void BM_EnergyReport(benchmark::State& st) {
  const Setup s(variant_of(st), st.range(1), 8);
  for (auto _ : st) benchmark::DoNotOptimize(energy_report(s.state, s.syn, s.spec));
}

void BM_Simulate(benchmark::State& st) {
  const Setup s(variant_of(st), 100, 7);
  SimulationOptions o;
  o.duration = 10.0;
  for (auto _ : st) benchmark::DoNotOptimize(simulate(s.spec, s.syn, s.state, o));
  st.SetItemsProcessed(st.iterations() * 1000);  // RK4 steps
}

}  // namespace

BENCHMARK(BM_Rhs)->ArgsProduct({{0, 1}, {100, 500}});
BENCHMARK(BM_Rk4Step)->ArgsProduct({{0, 1}, {100, 500}});
BENCHMARK(BM_EnergyReport)->ArgsProduct({{0, 1}, {100, 500}});
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
