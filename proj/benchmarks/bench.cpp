#include <benchmark/benchmark.h>

#include "tcsim/dynamics.hpp"
#include "tcsim/metrics.hpp"
#include "tcsim/model.hpp"

using namespace tcsim;

namespace {

ModelConfig bench_config(int cutoff) {
  ModelConfig cfg = symmetric_config(30.0, 1.25, 13.2, 2.0, 0.2);
  cfg.cutoff = cutoff;
  return cfg;
}

void BM_HamiltonianAssembly(benchmark::State& state) {
  const ModelConfig cfg = bench_config(static_cast<int>(state.range(0)));
  const OperatorSet ops = build_operators(HilbertSpace(cfg.cutoff));
  const HamiltonianModel model(cfg, ops, kTimeJacobian);
  ComplexMatrix h;
  double tau = -1.0;
  for (auto _ : state) {
    model.assemble(tau, h);
    benchmark::DoNotOptimize(h.data());
    tau += 1e-6;
  }
}
BENCHMARK(BM_HamiltonianAssembly)->Arg(3)->Arg(8)->Arg(16);

void BM_EvolveState(benchmark::State& state) {
  const ModelConfig cfg = bench_config(static_cast<int>(state.range(0)));
  const HilbertSpace space(cfg.cutoff);
  const StateVector psi0 = product_plus_state(space);
  for (auto _ : state) {
    auto traj = evolve_state(psi0, cfg);
    benchmark::DoNotOptimize(traj.final().amplitudes().data());
  }
}
BENCHMARK(BM_EvolveState)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_EvolveDensity(benchmark::State& state) {
  ModelConfig cfg = bench_config(3);
  cfg.gamma_c = 3.2e-3;
  cfg.gamma_s = 7.3e-4;
  const HilbertSpace space(cfg.cutoff);
  const DensityMatrix rho0(product_plus_state(space));
  for (auto _ : state) {
    auto traj = evolve_density(rho0, cfg);
    benchmark::DoNotOptimize(traj.final().entries().data());
  }
}
BENCHMARK(BM_EvolveDensity)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_Wootters(benchmark::State& state) {
  Eigen::Vector4cd psi(0.5, 0.5, -0.5, 0.5);
  const ComplexMatrix mixed = 0.7 * psi * psi.adjoint() + 0.075 * ComplexMatrix::Identity(4, 4);
  const TwoQubitDensity rho(mixed);
  for (auto _ : state) benchmark::DoNotOptimize(wootters_concurrence(rho));
}
BENCHMARK(BM_Wootters);

}  // namespace

BENCHMARK_MAIN();
