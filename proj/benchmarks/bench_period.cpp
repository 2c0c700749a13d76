#include <benchmark/benchmark.h>

#include "lacsim/liouville.hpp"
#include "lacsim/periodic.hpp"
#include "lacsim/spinops.hpp"

namespace {

using lacsim::liouville::RelaxationSpec;
using lacsim::periodic::DriveSpec;
using lacsim::spinops::SpinSystemSpec;

SpinSystemSpec system_for(int dim) {
  return dim == 2 ? SpinSystemSpec::single_spin(0.1) : SpinSystemSpec::dipolar(0.1, 0.785, 0.0);
}

const RelaxationSpec kRelax{1e-4, 0.5, 0.01, true};

void BM_StepExponential(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto pencil = lacsim::liouville::make_generator_pencil(system_for(dim), kRelax);
  const auto l = pencil.at(0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lacsim::liouville::real_propagator(l, 1e-2));
  }
}
BENCHMARK(BM_StepExponential)->Arg(2)->Arg(4);

void BM_BuildPeriod(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const DriveSpec drive{0.2, 0.1, 0.01, state.range(1), lacsim::periodic::Sampling::Midpoint};
  lacsim::periodic::PeriodOptions options;
  options.use_symmetry = state.range(2) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lacsim::periodic::build_period(system_for(dim), kRelax, drive, options));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_BuildPeriod)
    ->Args({2, 4096, 0})
    ->Args({2, 4096, 1})
    ->Args({4, 4096, 0})
    ->Args({4, 4096, 1})
    ->Unit(benchmark::kMillisecond);

void BM_SteadyState(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const DriveSpec drive{0.2, 0.1, 1.0, 256, lacsim::periodic::Sampling::Midpoint};
  const auto cache = lacsim::periodic::build_period(system_for(dim), kRelax, drive);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lacsim::periodic::solve_steady_state(cache));
  }
}
BENCHMARK(BM_SteadyState)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
