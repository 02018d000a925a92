#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irsopt/config.hpp"
#include "irsopt/per_slot_solver.hpp"

namespace irsopt::oracle {

/// Outcome of one property checked against its oracle. `worst` is the
/// largest gap seen, in the units the tolerance is stated in.
struct CheckResult {
  std::string name;
  bool passed = true;
  double worst = 0.0;
  double tolerance = 0.0;
  int trials = 0;
  std::string detail;
};

/// A random per-slot problem on a freshly drawn deployment of `config`.
struct SlotInstance {
  ChannelSlot channel;
  std::vector<double> weight, backlog, arrival;

  SlotProblem problem(const ScenarioConfig& config, bool use_irs = true) const {
    return {weight, backlog, arrival, &channel, &config, use_irs};
  }
};

/// Queue states are drawn wide enough that every power regime (off,
/// interior, rate-capped, p_max) shows up.
SlotInstance random_slot_instance(const ScenarioConfig& config, Rng& rng);

/// Closed-form power vs. grid search, and the stationarity residual at
/// interior optima.
std::vector<CheckResult> check_power_control(const ScenarioConfig& config, int trials, int grid_points, Rng& rng);

/// Transform identities at the optimal auxiliaries, the quadratic expansion,
/// Hermitian W, and ascent of the quadratic form under coordinate sweeps.
std::vector<CheckResult> check_fp_identities(const ScenarioConfig& config, int trials, Rng& rng);

/// best_discrete_phase against enumeration of every level.
CheckResult check_discrete_phase(int trials, Rng& rng);

/// Stacked cascaded channel against the surface-by-surface sum.
CheckResult check_cascade(const ScenarioConfig& config, int trials, Rng& rng);

/// solve_slot within `max_gap` relative of the global optimum, and
/// exhaustive_slot against the independent enumeration. Throws
/// EnumerationBudgetError when `config` is too large to enumerate.
std::vector<CheckResult> check_slot_optimality(const ScenarioConfig& config, int trials, double max_gap, Rng& rng);

/// Everything above at `trials` instances each (power grid 10^5 points).
std::vector<CheckResult> run_suite(const ScenarioConfig& config, int trials, std::uint64_t seed);

}  // namespace irsopt::oracle
