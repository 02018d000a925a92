#include "irsopt/queueing.hpp"

#include <algorithm>
#include <cassert>

namespace irsopt {

NetworkState::NetworkState(int num_devices)
    : backlog(static_cast<std::size_t>(num_devices), 0.0),
      delay_backlog(static_cast<std::size_t>(num_devices), 0.0),
      avg_arrival(static_cast<std::size_t>(num_devices), 0.0),
      last_arrival(static_cast<std::size_t>(num_devices), 0.0),
      delay(static_cast<std::size_t>(num_devices), 0.0) {}

std::vector<double> sample_arrivals(const ScenarioConfig& config, Rng& rng) {
  std::uniform_int_distribution<std::int64_t> dist(config.arrival_min, config.arrival_max);
  std::vector<double> a(static_cast<std::size_t>(config.num_devices));
  for (auto& x : a) x = static_cast<double>(dist(rng));
  return a;
}

double queue_update(double backlog, double arrival, double rate, double slot_duration) {
  return std::max(backlog + arrival - rate * slot_duration, 0.0);
}

double slot_delay(double backlog, double avg_arrival, double slot_duration) {
  if (backlog == 0.0) return 0.0;
  if (!(avg_arrival > 0.0)) throw UndefinedDelayError("delay undefined: non-empty queue with zero average arrival");
  return backlog / avg_arrival * slot_duration;
}

double virtual_queue_update(double delay_backlog, double delay_threshold, double next_delay) {
  return std::max(delay_backlog - delay_threshold + next_delay, 0.0);
}

double running_average_update(double avg_arrival, double arrival, std::int64_t t) {
  assert(t >= 1);
  return avg_arrival + (arrival - avg_arrival) / static_cast<double>(t);
}

double slot_weight(double backlog, double arrival, double avg_arrival, double delay_backlog,
                   double slot_duration) {
  if (avg_arrival > 0.0)
    return (backlog + arrival + avg_arrival * delay_backlog) * slot_duration / (avg_arrival * avg_arrival);
  if (backlog == 0.0 && arrival == 0.0 && delay_backlog == 0.0) return 0.0;
  throw UndefinedDelayError("slot weight undefined: zero average arrival with pending traffic");
}

std::vector<double> slot_weights(const NetworkState& s, double slot_duration) {
  std::vector<double> w(s.backlog.size());
  for (std::size_t k = 0; k < w.size(); ++k)
    w[k] = slot_weight(s.backlog[k], s.last_arrival[k], s.avg_arrival[k], s.delay_backlog[k], slot_duration);
  return w;
}

void observe_arrivals(NetworkState& s, std::span<const double> arrivals) {
  assert(arrivals.size() == s.backlog.size());
  for (std::size_t k = 0; k < arrivals.size(); ++k) {
    s.last_arrival[k] = arrivals[k];
    s.avg_arrival[k] = running_average_update(s.avg_arrival[k], arrivals[k], s.slot);
  }
}

std::vector<double> serve(NetworkState& s, std::span<const double> rates, const ScenarioConfig& config) {
  assert(rates.size() == s.backlog.size());
  const double tau = config.slot_duration;
  std::vector<double> served(rates.size());
  for (std::size_t k = 0; k < rates.size(); ++k) {
    const double offered = s.backlog[k] + s.last_arrival[k];
    served[k] = std::min(offered, rates[k] * tau);
    s.backlog[k] = queue_update(s.backlog[k], s.last_arrival[k], rates[k], tau);
    s.delay[k] = slot_delay(s.backlog[k], s.avg_arrival[k], tau);
    s.delay_backlog[k] = virtual_queue_update(s.delay_backlog[k], config.delay_threshold, s.delay[k]);
  }
  ++s.slot;
  return served;
}

bool time_average_bounded(std::span<const double> series, double burn_in_fraction, double factor) {
  std::vector<double> avg;
  avg.reserve(series.size());
  double sum = 0.0;
  for (std::size_t t = 0; t < series.size(); ++t) {
    sum += series[t];
    avg.push_back(sum / static_cast<double>(t + 1));
  }
  const auto skip = static_cast<std::ptrdiff_t>(burn_in_fraction * static_cast<double>(avg.size()));
  std::vector<double> kept(avg.begin() + skip, avg.end());
  if (kept.empty()) return true;
  const double sup = *std::max_element(kept.begin(), kept.end());
  if (sup == 0.0) return true;
  auto mid = kept.begin() + static_cast<std::ptrdiff_t>(kept.size() / 2);
  std::nth_element(kept.begin(), mid, kept.end());
  return sup < factor * *mid;
}

}  // namespace irsopt
