#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "irsopt/config.hpp"

namespace irsopt {

class DeadChannelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Closed-form per-device power for a fixed reflection vector. Each device
// minimizes -omega*R(p) + V*p subject to 0 <= p <= p_max and R(p)*tau <= Q+A;
// the function is convex in p so the optimum is the clipped stationary point.
// Channels enter only through the gain |h|^2.

/// B * log2(1 + p*|h|^2 / sigma^2), bits/s.
double rate(double power, double channel_gain, double noise_power, double bandwidth);

/// omega*B/(V ln 2) - sigma^2/|h|^2; negative when queue pressure is too
/// low to justify transmitting. Throws DeadChannelError when |h|^2 == 0.
double unconstrained_minimizer(double weight, double bandwidth, double control_param,
                               double channel_gain, double noise_power);

/// Power at which R*tau == Q + A. Returns +infinity when the exponent
/// (Q+A)/(B tau) exceeds 60 (the cap can then never bind below p_max).
double rate_cap_power(double backlog, double arrival, double bandwidth, double slot_duration,
                      double channel_gain, double noise_power);

/// min{max{0, p1}, p2, p_max}; 0 for a dead channel.
double optimal_power(double weight, double backlog, double arrival, const ScenarioConfig& config,
                     double channel_gain);

/// Per-device term of the power subproblem, -omega*R(p) + V*p.
double power_objective(double power, double weight, double channel_gain, const ScenarioConfig& config);

struct PowerDecision {
  std::vector<double> power;  // W
  std::vector<double> rate;   // bits/s
};

PowerDecision optimal_powers(std::span<const double> weights, std::span<const double> backlog,
                             std::span<const double> arrivals, std::span<const double> channel_gains,
                             const ScenarioConfig& config);

}  // namespace irsopt
