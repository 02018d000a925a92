#include <benchmark/benchmark.h>

#include "irsopt/oracle_suite.hpp"
#include "irsopt/per_slot_solver.hpp"

using namespace irsopt;

namespace {

// N_y = 4 and M = 2 fixed, so MN = 8 * N_x.
ScenarioConfig scenario(int elements_x) {
  ScenarioConfig c = default_scenario();
  c.elements_x = elements_x;
  return c;
}

void BM_CoordinateSweep(benchmark::State& state) {
  const ScenarioConfig c = scenario(static_cast<int>(state.range(0)));
  Rng rng(1);
  const auto inst = oracle::random_slot_instance(c, rng);
  const std::vector<double> p(inst.weight.size(), 0.01);
  const CVector v = PhaseVector(c.total_elements(), c.phase_bits).values();
  const auto eta = update_eta(sinr(p, inst.channel, v, c.noise_power()));
  const auto eta_tilde = scaled_weights(inst.weight, eta, c.bandwidth);
  const CVector zeta = update_zeta(p, eta_tilde, inst.channel, v, c.noise_power());
  const QuadraticForm form = assemble_quadratic(p, eta_tilde, zeta, inst.channel, c.noise_power());
  const PhaseVector start = PhaseVector::random(c.total_elements(), c.phase_bits, rng);
  for (auto _ : state) benchmark::DoNotOptimize(coordinate_sweep(form, start));
  state.SetComplexityN(c.total_elements());
}
BENCHMARK(BM_CoordinateSweep)->DenseRange(1, 16, 3)->Complexity();

void BM_SolveSlot(benchmark::State& state) {
  const ScenarioConfig c = scenario(static_cast<int>(state.range(0)));
  Rng rng(2);
  const auto inst = oracle::random_slot_instance(c, rng);
  const PhaseVector start(c.total_elements(), c.phase_bits);
  for (auto _ : state) benchmark::DoNotOptimize(solve_slot(inst.problem(c), c.solver, start));
  state.SetComplexityN(c.total_elements());
}
BENCHMARK(BM_SolveSlot)->DenseRange(1, 16, 3)->Complexity();

void BM_ExhaustiveTiny(benchmark::State& state) {
  const ScenarioConfig c = tiny_scenario();
  Rng rng(3);
  const auto inst = oracle::random_slot_instance(c, rng);
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_slot(inst.problem(c), c.enumeration_budget));
}
BENCHMARK(BM_ExhaustiveTiny);

}  // namespace

BENCHMARK_MAIN();
