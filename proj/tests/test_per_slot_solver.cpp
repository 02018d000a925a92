#include <doctest.h>

#include <cmath>

#include "irsopt/oracle_suite.hpp"
#include "irsopt/oracles.hpp"
#include "irsopt/per_slot_solver.hpp"
#include "irsopt/power_control.hpp"

using namespace irsopt;

TEST_CASE("objective at zero power is the static IRS term") {
  ScenarioConfig c = default_scenario();
  c.elements_x = 4;  // M N = 2 * 16
  Rng rng(1);
  const auto inst = oracle::random_slot_instance(c, rng);
  const std::vector<double> zero(10, 0.0);
  const PhaseVector v(c.total_elements(), c.phase_bits);
  const double expected = 50.0 * 32 * dbm_to_watts(2.0);
  CHECK(expected == doctest::Approx(2.536).epsilon(1e-3));
  SlotProblem problem = inst.problem(c);
  problem.weight = zero;
  CHECK(slot_objective(zero, v, problem) == doctest::Approx(expected).epsilon(1e-12));
  problem = inst.problem(c);
  CHECK(slot_objective(zero, v, problem) == doctest::Approx(expected).epsilon(1e-12));

  // more rate at the same power lowers the objective
  std::vector<double> p(10, 0.01);
  const double base = slot_objective(p, v, problem);
  ChannelSlot stronger = inst.channel;
  stronger.direct *= 2.0;
  SlotProblem boosted = problem;
  boosted.channel = &stronger;
  CHECK(slot_objective(p, v, boosted) < base);
}

TEST_CASE("objective agrees with the oracle") {
  const ScenarioConfig c = default_scenario();
  Rng rng(2);
  const auto inst = oracle::random_slot_instance(c, rng);
  const PhaseVector v = PhaseVector::random(c.total_elements(), c.phase_bits, rng);
  const std::vector<double> p{0.01, 0.02, 0.0, 0.1, 0.05, 0.001, 0.002, 0.003, 0.004, 0.005};
  CHECK(slot_objective(p, v, inst.problem(c)) ==
        doctest::Approx(oracle::slot_objective(p, inst.weight, inst.channel, oracle::phase_values(v.indices(), 3), c))
            .epsilon(1e-12));
}

TEST_CASE("decoupled channel: one pass, closed-form powers") {
  const ScenarioConfig c = default_scenario();
  Rng rng(3);
  auto inst = oracle::random_slot_instance(c, rng);
  inst.channel.cascaded.setZero();
  const PhaseVector start = PhaseVector::random(c.total_elements(), c.phase_bits, rng);
  const SlotDecision d = solve_slot(inst.problem(c), c.solver, start);
  CHECK(d.phases == start);
  CHECK(d.iterations <= 1);
  CHECK(d.converged);
  for (int k = 0; k < c.num_devices; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    CHECK(d.power[kk] == optimal_power(inst.weight[kk], inst.backlog[kk], inst.arrival[kk], c,
                                       std::norm(inst.channel.direct(k))));
  }
}

TEST_CASE("objective trace is non-increasing and decisions are feasible") {
  for (int K : {5, 10, 15}) {
    ScenarioConfig c = default_scenario();
    c.num_devices = K;
    Rng rng(10 + K);
    for (int rep = 0; rep < 10; ++rep) {
      const auto inst = oracle::random_slot_instance(c, rng);
      const SlotDecision d = solve_slot(inst.problem(c), c.solver, PhaseVector(c.total_elements(), c.phase_bits));
      REQUIRE(!d.objective_trace.empty());
      for (std::size_t i = 1; i < d.objective_trace.size(); ++i)
        CHECK(d.objective_trace[i] <= d.objective_trace[i - 1] + 1e-9);
      CHECK(d.objective == d.objective_trace.back());
      CHECK(d.iterations <= c.solver.max_outer);
      CHECK(std::isfinite(d.objective));
      for (int k = 0; k < K; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        CHECK(d.power[kk] >= 0.0);
        CHECK(d.power[kk] <= c.max_power);
        CHECK(d.rate[kk] * c.slot_duration <= inst.backlog[kk] + inst.arrival[kk] + 1e-9);
      }
    }
  }
}

TEST_CASE("exhaustive search") {
  const ScenarioConfig tiny = tiny_scenario();
  CHECK(enumeration_size(1, 1) == 2);
  CHECK(enumeration_size(2, 1) == 4);
  CHECK(enumeration_size(32, 3) == std::numeric_limits<std::uint64_t>::max());

  Rng rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    const auto inst = oracle::random_slot_instance(tiny, rng);
    const SlotDecision best = exhaustive_slot(inst.problem(tiny), tiny.enumeration_budget);
    const SlotDecision local = solve_slot(inst.problem(tiny), tiny.solver, PhaseVector(2, 1));
    CHECK(best.iterations == 4);
    CHECK(best.objective <= local.objective + 1e-12);
    const double reference = oracle::slot_exhaustive(inst.weight, inst.backlog, inst.arrival, inst.channel, tiny);
    CHECK(best.objective == doctest::Approx(reference).epsilon(1e-8));
    CHECK((local.objective - reference) / std::abs(reference) <= 0.05);
  }

  auto inst = oracle::random_slot_instance(tiny, rng);
  inst.channel.cascaded.setZero();
  CHECK(exhaustive_slot(inst.problem(tiny), 16).objective ==
        doctest::Approx(solve_slot(inst.problem(tiny), tiny.solver, PhaseVector(2, 1)).objective).epsilon(1e-12));

  const ScenarioConfig big = default_scenario();
  const auto big_inst = oracle::random_slot_instance(big, rng);
  CHECK_THROWS_AS(exhaustive_slot(big_inst.problem(big), big.enumeration_budget), EnumerationBudgetError);
}

TEST_CASE("without surfaces the static power is not charged") {
  const ScenarioConfig c = default_scenario();
  Rng rng(5);
  const auto inst = oracle::random_slot_instance(c, rng);
  const std::vector<double> zero(10, 0.0);
  const SlotProblem off = inst.problem(c, false);
  CHECK(slot_objective(zero, PhaseVector(c.total_elements(), c.phase_bits), off) == 0.0);
  const SlotDecision d = solve_slot(off, c.solver, PhaseVector(c.total_elements(), c.phase_bits));
  for (int k = 0; k < c.num_devices; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    CHECK(d.power[kk] == optimal_power(inst.weight[kk], inst.backlog[kk], inst.arrival[kk], c,
                                       std::norm(inst.channel.direct(k))));
  }
}
