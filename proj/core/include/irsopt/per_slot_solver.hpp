#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "irsopt/irs_fp.hpp"

namespace irsopt {

class EnumerationBudgetError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Inputs of the per-slot drift-plus-penalty problem
///   min -sum_k omega_k R_k + V (sum_k p_k + M N P_I)
///   s.t. R_k tau <= Q_k + A_k, 0 <= p_k <= p_max, discrete phases.
struct SlotProblem {
  std::span<const double> weight;   // omega
  std::span<const double> backlog;  // Q
  std::span<const double> arrival;  // A
  const ChannelSlot* channel = nullptr;
  const ScenarioConfig* config = nullptr;
  bool use_irs = true;  // false: reflected paths and static IRS power are ignored
};

struct SlotDecision {
  std::vector<double> power;
  std::vector<double> rate;
  PhaseVector phases;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // Obj(0), Obj(1), ...
};

/// Value of the per-slot objective at (p, v).
double slot_objective(std::span<const double> power, const PhaseVector& phases, const SlotProblem& problem);

/// Closed-form optimal power for fixed phases, packaged as a decision.
SlotDecision decide_power(const SlotProblem& problem, const PhaseVector& phases);

/// Two-step alternating optimization. Each outer iteration redesigns the
/// phases for the incumbent powers and then re-solves the powers for those
/// phases; the pair is committed only if the objective does not increase.
/// Stops once |Obj(i) - Obj(i-1)|^2 < tolerance or after max_outer passes.
SlotDecision solve_slot(const SlotProblem& problem, const SolverSettings& settings, const PhaseVector& warm_start);

/// Global optimum by enumerating all (2^b)^(MN) phase vectors with the
/// closed-form power per candidate. Throws EnumerationBudgetError when the
/// candidate count exceeds `budget`.
SlotDecision exhaustive_slot(const SlotProblem& problem, std::uint64_t budget);

/// Number of candidates exhaustive_slot would visit, saturating at UINT64_MAX.
std::uint64_t enumeration_size(int num_elements, int bits);

}  // namespace irsopt
