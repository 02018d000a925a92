#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "irsopt/per_slot_solver.hpp"

namespace irsopt {

enum class ControllerKind { proposed, random_phase, without_irs, exhaustive };

std::string_view to_string(ControllerKind kind);
std::optional<ControllerKind> parse_controller(std::string_view name);
/// Comma-separated list of every valid controller name.
std::string controller_names();

struct Controller {
  ControllerKind kind = ControllerKind::proposed;
  SolverSettings settings;
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::int64_t slot, const std::string& what)
      : std::runtime_error("slot " + std::to_string(slot) + ": " + what), slot_(slot) {}
  std::int64_t slot() const noexcept { return slot_; }

 private:
  std::int64_t slot_;
};

/// Per-slot traces of one episode. Device-indexed series are stored
/// slot-major (index (t-1)*K + k) and hold end-of-slot values: Q^{t+1},
/// D^{t+1}, d^{t+1} and the running mean A~^t.
struct RunMetrics {
  int num_devices = 0;
  int horizon = 0;
  std::vector<double> total_power;     // P^t, W
  std::vector<double> objective;       // per-slot objective at the committed decision
  std::vector<int> iterations;         // outer iterations of the slot solver
  std::vector<bool> converged;
  std::vector<double> wall_clock_s;
  std::vector<double> transmit_power;  // p_k^t
  std::vector<double> arrival;         // A_k^t
  std::vector<double> served;          // bits served in the slot
  std::vector<double> backlog;         // Q
  std::vector<double> delay_backlog;   // D
  std::vector<double> avg_arrival;     // A~
  std::vector<double> delay;           // d, seconds
  std::vector<std::vector<double>> convergence;  // objective trace per slot
  std::vector<ChannelSlot> channels;             // only when recorded

  double at(const std::vector<double>& series, int t, int k) const {
    return series[static_cast<std::size_t>(t) * static_cast<std::size_t>(num_devices) + static_cast<std::size_t>(k)];
  }
  /// First slot index (0-based) kept by the stationary averages.
  int burn_in_slots(double fraction) const { return static_cast<int>(fraction * horizon); }
};

inline constexpr double kDefaultBurnIn = 0.2;

struct EpisodeSummary {
  double mean_power_w = 0.0;
  double mean_dqueue = 0.0;   // virtual queue, averaged over slots and devices
  double mean_delay_s = 0.0;  // averaged over slots and devices
  double max_device_delay_s = 0.0;
};

EpisodeSummary summarize(const RunMetrics& metrics, double burn_in_fraction = kDefaultBurnIn);

struct EpisodeOptions {
  bool record_channels = false;
  std::span<const ChannelSlot> replay;  // when non-empty, used instead of drawing channels
};

/// Seed of run `r` within a batch.
std::uint64_t run_seed(std::uint64_t base_seed, int run);

RunMetrics run_episode(const ScenarioConfig& config, const Controller& controller, std::uint64_t seed,
                       const EpisodeOptions& options = {});

struct BatchRow {
  ControllerKind controller = ControllerKind::proposed;
  int runs = 0;
  double mean_power_w = 0.0;
  double std_power_w = 0.0;
  double mean_dqueue = 0.0;
  double mean_delay_s = 0.0;
  std::vector<EpisodeSummary> per_run;
};

/// Mean of the per-run summaries and the sample standard deviation of the
/// per-run mean power.
BatchRow aggregate(ControllerKind controller, std::vector<EpisodeSummary> per_run);

/// Independent episodes per controller; run r uses run_seed(base_seed, r)
/// for every controller so they see the same deployments, arrivals and
/// channels. `jobs` > 1 spreads runs over threads without changing results.
/// When `first_runs` is given it receives the full metrics of run 0 of each
/// controller, in controller order.
std::vector<BatchRow> run_batch(const ScenarioConfig& config, std::span<const ControllerKind> controllers,
                                int num_runs, std::uint64_t base_seed, int jobs = 1,
                                std::vector<RunMetrics>* first_runs = nullptr);

enum class SweepAxis { control_param, num_devices, num_irs, elements_per_irs, delay_threshold, arrival_max };

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_axis(std::string_view name);
std::string axis_names();

/// Copy of `config` with one swept quantity set. N keeps N_y and requires
/// an integral N_x; A_max is expressed in the config's arrival unit.
/// Throws ConfigError for values that do not map onto a valid scenario.
ScenarioConfig apply_axis(const ScenarioConfig& config, SweepAxis axis, double value);

struct SweepRow {
  double value = 0.0;
  BatchRow batch;
};

std::vector<SweepRow> sweep(const ScenarioConfig& config, SweepAxis axis, std::span<const double> values,
                            std::span<const ControllerKind> controllers, int num_runs, std::uint64_t base_seed,
                            int jobs = 1);

}  // namespace irsopt
