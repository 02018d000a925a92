#include "irsopt/per_slot_solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "irsopt/power_control.hpp"

namespace irsopt {

namespace {

std::vector<double> channel_gains(const SlotProblem& problem, const PhaseVector& phases) {
  const ChannelSlot& ch = *problem.channel;
  const CVector h = (problem.use_irs && ch.num_elements() > 0) ? effective_channels(ch, phases.values()) : ch.direct;
  std::vector<double> g(static_cast<std::size_t>(h.size()));
  for (Eigen::Index k = 0; k < h.size(); ++k) g[static_cast<std::size_t>(k)] = std::norm(h(k));
  return g;
}

double static_power(const SlotProblem& problem) {
  return problem.use_irs ? problem.config->irs_static_power() : 0.0;
}

double objective_from_rates(std::span<const double> power, std::span<const double> rates,
                            const SlotProblem& problem) {
  double utility = 0.0;
  double total_power = static_power(problem);
  for (std::size_t k = 0; k < power.size(); ++k) {
    utility += problem.weight[k] * rates[k];
    total_power += power[k];
  }
  return -utility + problem.config->control_param * total_power;
}

PhaseVector checked_start(const SlotProblem& problem, const PhaseVector& warm_start) {
  const int n = problem.channel->num_elements();
  const int bits = problem.config->phase_bits;
  if (warm_start.size() == n && warm_start.bits() == bits) return warm_start;
  return PhaseVector(n, bits);
}

}  // namespace

double slot_objective(std::span<const double> power, const PhaseVector& phases, const SlotProblem& problem) {
  const auto gains = channel_gains(problem, phases);
  const ScenarioConfig& c = *problem.config;
  std::vector<double> rates(gains.size());
  for (std::size_t k = 0; k < gains.size(); ++k) rates[k] = rate(power[k], gains[k], c.noise_power(), c.bandwidth);
  return objective_from_rates(power, rates, problem);
}

SlotDecision decide_power(const SlotProblem& problem, const PhaseVector& phases) {
  const auto gains = channel_gains(problem, phases);
  PowerDecision pd = optimal_powers(problem.weight, problem.backlog, problem.arrival, gains, *problem.config);
  SlotDecision d;
  d.objective = objective_from_rates(pd.power, pd.rate, problem);
  d.power = std::move(pd.power);
  d.rate = std::move(pd.rate);
  d.phases = phases;
  return d;
}

SlotDecision solve_slot(const SlotProblem& problem, const SolverSettings& settings, const PhaseVector& warm_start) {
  assert(problem.channel && problem.config);
  const ScenarioConfig& c = *problem.config;

  SlotDecision best = decide_power(problem, checked_start(problem, warm_start));
  std::vector<double> trace{best.objective};
  int iterations = 0;
  bool converged = false;

  if (!problem.use_irs || problem.channel->num_elements() == 0) {
    best.objective_trace = std::move(trace);
    best.iterations = 1;
    best.converged = true;
    return best;
  }

  const PhaseProblem phase_problem_base{{}, problem.weight, problem.channel, c.noise_power(), c.bandwidth};
  for (int i = 1; i <= settings.max_outer; ++i) {
    iterations = i;
    PhaseProblem pp = phase_problem_base;
    pp.power = best.power;
    const PhaseDesign design = design_phases(pp, best.phases, settings.tolerance, settings.max_inner);
    SlotDecision candidate = decide_power(problem, design.phases);

    if (candidate.objective > best.objective) {
      // The phase step ignores the rate cap, so re-solving the powers can
      // occasionally lose ground; keep the incumbent and stop.
      converged = true;
      break;
    }
    const double delta = best.objective - candidate.objective;
    best = std::move(candidate);
    trace.push_back(best.objective);
    if (delta * delta < settings.tolerance) {
      converged = true;
      break;
    }
  }
  best.objective_trace = std::move(trace);
  best.iterations = iterations;
  best.converged = converged;
  return best;
}

std::uint64_t enumeration_size(int num_elements, int bits) {
  const auto levels = std::uint64_t{1} << bits;
  std::uint64_t total = 1;
  for (int n = 0; n < num_elements; ++n) {
    if (total > std::numeric_limits<std::uint64_t>::max() / levels) return std::numeric_limits<std::uint64_t>::max();
    total *= levels;
  }
  return total;
}

SlotDecision exhaustive_slot(const SlotProblem& problem, std::uint64_t budget) {
  assert(problem.channel && problem.config);
  const int n = problem.use_irs ? problem.channel->num_elements() : 0;
  const int bits = problem.config->phase_bits;
  const std::uint64_t count = enumeration_size(n, bits);
  if (count > budget)
    throw EnumerationBudgetError("exhaustive search needs " + std::to_string(count) +
                                 " candidates, budget is " + std::to_string(budget));

  PhaseVector phases(problem.channel->num_elements(), bits);
  SlotDecision best = decide_power(problem, phases);
  const int levels = phases.levels();
  for (std::uint64_t visited = 1; visited < count; ++visited) {
    // Odometer increment, element 0 fastest.
    for (int i = 0; i < n; ++i) {
      const int next = phases.index(i) + 1;
      if (next < levels) {
        phases.set_index(i, next);
        break;
      }
      phases.set_index(i, 0);
    }
    SlotDecision candidate = decide_power(problem, phases);
    if (candidate.objective < best.objective) best = std::move(candidate);
  }
  best.iterations = static_cast<int>(std::min<std::uint64_t>(count, std::numeric_limits<int>::max()));
  best.converged = true;
  best.objective_trace = {best.objective};
  return best;
}

}  // namespace irsopt
