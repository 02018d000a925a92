#include "irsopt/power_control.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>

namespace irsopt {

namespace {
constexpr double kMaxCapExponent = 60.0;
}

double rate(double power, double channel_gain, double noise_power, double bandwidth) {
  return bandwidth * std::log2(1.0 + power * channel_gain / noise_power);
}

double unconstrained_minimizer(double weight, double bandwidth, double control_param, double channel_gain,
                               double noise_power) {
  if (!(channel_gain > 0.0)) throw DeadChannelError("channel gain is zero");
  return weight * bandwidth / (control_param * std::numbers::ln2) - noise_power / channel_gain;
}

double rate_cap_power(double backlog, double arrival, double bandwidth, double slot_duration,
                      double channel_gain, double noise_power) {
  if (!(channel_gain > 0.0)) throw DeadChannelError("channel gain is zero");
  const double exponent = (backlog + arrival) / (bandwidth * slot_duration);
  if (exponent > kMaxCapExponent) return std::numeric_limits<double>::infinity();
  return noise_power / channel_gain * std::expm1(exponent * std::numbers::ln2);
}

double optimal_power(double weight, double backlog, double arrival, const ScenarioConfig& config,
                     double channel_gain) {
  if (!(channel_gain > 0.0)) return 0.0;
  const double sigma2 = config.noise_power();
  const double p1 = unconstrained_minimizer(weight, config.bandwidth, config.control_param, channel_gain, sigma2);
  const double p2 =
      rate_cap_power(backlog, arrival, config.bandwidth, config.slot_duration, channel_gain, sigma2);
  return std::min({std::max(0.0, p1), p2, config.max_power});
}

double power_objective(double power, double weight, double channel_gain, const ScenarioConfig& config) {
  return -weight * rate(power, channel_gain, config.noise_power(), config.bandwidth) +
         config.control_param * power;
}

PowerDecision optimal_powers(std::span<const double> weights, std::span<const double> backlog,
                             std::span<const double> arrivals, std::span<const double> channel_gains,
                             const ScenarioConfig& config) {
  const std::size_t n = weights.size();
  assert(backlog.size() == n && arrivals.size() == n && channel_gains.size() == n);
  PowerDecision d;
  d.power.resize(n);
  d.rate.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    d.power[k] = optimal_power(weights[k], backlog[k], arrivals[k], config, channel_gains[k]);
    d.rate[k] = rate(d.power[k], channel_gains[k], config.noise_power(), config.bandwidth);
  }
  return d;
}

}  // namespace irsopt
