#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "irsopt/config.hpp"

namespace irsopt {

class UndefinedDelayError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Real and virtual queues of every device. All delays are in seconds.
struct NetworkState {
  std::vector<double> backlog;        // Q, bits
  std::vector<double> delay_backlog;  // D, seconds of accumulated excess delay
  std::vector<double> avg_arrival;    // A~, bits per slot
  std::vector<double> last_arrival;   // A, bits
  std::vector<double> delay;          // d, seconds
  std::int64_t slot = 1;

  explicit NetworkState(int num_devices = 0);
  int num_devices() const { return static_cast<int>(backlog.size()); }
};

/// Integer-valued uniform arrivals on [arrival_min, arrival_max] bits.
std::vector<double> sample_arrivals(const ScenarioConfig& config, Rng& rng);

/// max{Q + A - R*tau, 0}
double queue_update(double backlog, double arrival, double rate, double slot_duration);

/// Little's-law delay (Q / A~) * tau. Throws UndefinedDelayError when
/// A~ = 0 with a non-empty queue.
double slot_delay(double backlog, double avg_arrival, double slot_duration);

/// max{D - d_th + d_next, 0}
double virtual_queue_update(double delay_backlog, double delay_threshold, double next_delay);

/// A~ + (A - A~) / t, the incremental form of the running mean.
double running_average_update(double avg_arrival, double arrival, std::int64_t t);

/// omega = (Q + A + A~ * D) * tau / A~^2. An idle device (Q = A = D = 0)
/// has weight 0 even before any arrival has been seen.
double slot_weight(double backlog, double arrival, double avg_arrival, double delay_backlog,
                   double slot_duration);
std::vector<double> slot_weights(const NetworkState& state, double slot_duration);

/// Start of slot: record arrivals and fold them into the running average.
void observe_arrivals(NetworkState& state, std::span<const double> arrivals);

/// End of slot: serve `rates` (bits/s) for one slot, then update Q, d and D.
/// Returns the bits actually served per device.
std::vector<double> serve(NetworkState& state, std::span<const double> rates, const ScenarioConfig& config);

/// Strong-stability proxy for a per-slot series x^1..x^T: after the burn-in
/// slots, the running time average (1/t) sum_{s<=t} x^s stays below
/// `factor` times its median over the same slots. A trace whose kept
/// averages are all zero is bounded.
bool time_average_bounded(std::span<const double> series, double burn_in_fraction = 0.2, double factor = 10.0);

}  // namespace irsopt
