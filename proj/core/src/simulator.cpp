#include "irsopt/simulator.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "irsopt/queueing.hpp"

namespace irsopt {

namespace {

constexpr std::array kControllers{
    std::pair{ControllerKind::proposed, std::string_view{"proposed"}},
    std::pair{ControllerKind::random_phase, std::string_view{"random_phase"}},
    std::pair{ControllerKind::without_irs, std::string_view{"without_irs"}},
    std::pair{ControllerKind::exhaustive, std::string_view{"exhaustive"}},
};

constexpr std::array kAxes{
    std::pair{SweepAxis::control_param, std::string_view{"V"}},
    std::pair{SweepAxis::num_devices, std::string_view{"K"}},
    std::pair{SweepAxis::num_irs, std::string_view{"M"}},
    std::pair{SweepAxis::elements_per_irs, std::string_view{"N"}},
    std::pair{SweepAxis::delay_threshold, std::string_view{"d_th"}},
    std::pair{SweepAxis::arrival_max, std::string_view{"A_max"}},
};

// Stream ids for derive_seed within one episode.
enum Stream : std::uint64_t { kDeployment = 0, kArrivals = 1, kChannel = 2, kController = 3 };

int checked_count(double value, const char* key) {
  if (!(std::floor(value) == value) || value < 0 || value > 1e6)
    throw ConfigError(key, "expected a non-negative integer, got " + std::to_string(value));
  return static_cast<int>(value);
}

}  // namespace

std::string_view to_string(ControllerKind kind) {
  for (const auto& [k, name] : kControllers)
    if (k == kind) return name;
  return "unknown";
}

std::optional<ControllerKind> parse_controller(std::string_view name) {
  for (const auto& [k, n] : kControllers)
    if (n == name) return k;
  return std::nullopt;
}

std::string controller_names() {
  std::string out;
  for (const auto& [k, n] : kControllers) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

std::string_view to_string(SweepAxis axis) {
  for (const auto& [a, name] : kAxes)
    if (a == axis) return name;
  return "unknown";
}

std::optional<SweepAxis> parse_axis(std::string_view name) {
  for (const auto& [a, n] : kAxes)
    if (n == name) return a;
  return std::nullopt;
}

std::string axis_names() {
  std::string out;
  for (const auto& [a, n] : kAxes) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

EpisodeSummary summarize(const RunMetrics& m, double burn_in_fraction) {
  EpisodeSummary s;
  const int start = std::min(m.burn_in_slots(burn_in_fraction), m.horizon - 1);
  const int slots = m.horizon - start;
  const int K = m.num_devices;
  std::vector<double> device_delay(static_cast<std::size_t>(K), 0.0);
  for (int t = start; t < m.horizon; ++t) {
    s.mean_power_w += m.total_power[static_cast<std::size_t>(t)];
    for (int k = 0; k < K; ++k) {
      s.mean_dqueue += m.at(m.delay_backlog, t, k);
      s.mean_delay_s += m.at(m.delay, t, k);
      device_delay[static_cast<std::size_t>(k)] += m.at(m.delay, t, k);
    }
  }
  s.mean_power_w /= slots;
  s.mean_dqueue /= static_cast<double>(slots) * K;
  s.mean_delay_s /= static_cast<double>(slots) * K;
  for (double d : device_delay) s.max_device_delay_s = std::max(s.max_device_delay_s, d / slots);
  return s;
}

std::uint64_t run_seed(std::uint64_t base_seed, int run) {
  return derive_seed(base_seed, 0x1000u + static_cast<std::uint64_t>(run));
}

RunMetrics run_episode(const ScenarioConfig& config, const Controller& controller, std::uint64_t seed,
                       const EpisodeOptions& options) {
  validate(config);
  const int K = config.num_devices;
  const int T = config.horizon;
  const bool uses_irs = controller.kind != ControllerKind::without_irs;

  Rng deployment_rng(derive_seed(seed, kDeployment));
  Rng arrival_rng(derive_seed(seed, kArrivals));
  Rng channel_rng(derive_seed(seed, kChannel));
  Rng controller_rng(derive_seed(seed, kController));

  const Deployment deployment = make_deployment(config, deployment_rng);
  const ChannelModel model(config, deployment);
  if (!options.replay.empty() && options.replay.size() < static_cast<std::size_t>(T))
    throw SimulationError(static_cast<std::int64_t>(options.replay.size()) + 1, "channel replay is shorter than the horizon");

  RunMetrics m;
  m.num_devices = K;
  m.horizon = T;
  const auto series = static_cast<std::size_t>(T) * static_cast<std::size_t>(K);
  for (auto* v : {&m.transmit_power, &m.arrival, &m.served, &m.backlog, &m.delay_backlog, &m.avg_arrival, &m.delay})
    v->reserve(series);
  m.total_power.reserve(static_cast<std::size_t>(T));

  NetworkState state(K);
  PhaseVector phases(config.total_elements(), config.phase_bits);

  for (std::int64_t t = 1; t <= T; ++t) {
    const auto started = std::chrono::steady_clock::now();
    try {
      const auto arrivals = sample_arrivals(config, arrival_rng);
      ChannelSlot channel;
      if (options.replay.empty()) {
        channel = model.draw(channel_rng, t);
      } else {
        channel = options.replay[static_cast<std::size_t>(t - 1)];
        if (channel.num_devices() != K || channel.num_elements() != config.total_elements())
          throw SimulationError(t, "replayed channel shape does not match the scenario");
      }

      observe_arrivals(state, arrivals);
      const auto weights = slot_weights(state, config.slot_duration);
      const SlotProblem problem{weights, state.backlog, state.last_arrival, &channel, &config, uses_irs};

      SlotDecision decision;
      switch (controller.kind) {
        case ControllerKind::proposed:
          decision = solve_slot(problem, controller.settings, phases);
          phases = decision.phases;
          break;
        case ControllerKind::random_phase:
          decision = decide_power(problem, PhaseVector::random(config.total_elements(), config.phase_bits, controller_rng));
          decision.iterations = 1;
          decision.converged = true;
          decision.objective_trace = {decision.objective};
          break;
        case ControllerKind::without_irs:
          decision = solve_slot(problem, controller.settings, phases);
          break;
        case ControllerKind::exhaustive:
          decision = exhaustive_slot(problem, config.enumeration_budget);
          break;
      }

      double total = uses_irs ? config.irs_static_power() : 0.0;
      for (double p : decision.power) total += p;

      m.arrival.insert(m.arrival.end(), arrivals.begin(), arrivals.end());
      m.transmit_power.insert(m.transmit_power.end(), decision.power.begin(), decision.power.end());
      const auto served = serve(state, decision.rate, config);
      m.served.insert(m.served.end(), served.begin(), served.end());
      m.backlog.insert(m.backlog.end(), state.backlog.begin(), state.backlog.end());
      m.delay_backlog.insert(m.delay_backlog.end(), state.delay_backlog.begin(), state.delay_backlog.end());
      m.avg_arrival.insert(m.avg_arrival.end(), state.avg_arrival.begin(), state.avg_arrival.end());
      m.delay.insert(m.delay.end(), state.delay.begin(), state.delay.end());
      m.total_power.push_back(total);
      m.objective.push_back(decision.objective);
      m.iterations.push_back(decision.iterations);
      m.converged.push_back(decision.converged);
      m.convergence.push_back(std::move(decision.objective_trace));
      if (options.record_channels) m.channels.push_back(std::move(channel));
    } catch (const SimulationError&) {
      throw;
    } catch (const std::exception& e) {
      throw SimulationError(t, e.what());
    }
    m.wall_clock_s.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
  }
  return m;
}

BatchRow aggregate(ControllerKind controller, std::vector<EpisodeSummary> per_run) {
  BatchRow row;
  row.controller = controller;
  row.runs = static_cast<int>(per_run.size());
  if (per_run.empty()) return row;
  for (const auto& s : per_run) {
    row.mean_power_w += s.mean_power_w;
    row.mean_dqueue += s.mean_dqueue;
    row.mean_delay_s += s.mean_delay_s;
  }
  row.mean_power_w /= row.runs;
  row.mean_dqueue /= row.runs;
  row.mean_delay_s /= row.runs;
  double var = 0.0;
  for (const auto& s : per_run) var += (s.mean_power_w - row.mean_power_w) * (s.mean_power_w - row.mean_power_w);
  row.std_power_w = row.runs > 1 ? std::sqrt(var / (row.runs - 1)) : 0.0;
  row.per_run = std::move(per_run);
  return row;
}

std::vector<BatchRow> run_batch(const ScenarioConfig& config, std::span<const ControllerKind> controllers,
                                int num_runs, std::uint64_t base_seed, int jobs, std::vector<RunMetrics>* first_runs) {
  if (num_runs < 1) throw std::invalid_argument("num_runs must be >= 1");
  const std::size_t C = controllers.size();
  const auto R = static_cast<std::size_t>(num_runs);
  std::vector<EpisodeSummary> results(C * R);
  if (first_runs) first_runs->assign(C, RunMetrics{});

  auto run_task = [&](std::size_t task) {
    const std::size_t c = task / R;
    const int r = static_cast<int>(task % R);
    Controller ctl{controllers[c], config.solver};
    RunMetrics m = run_episode(config, ctl, run_seed(base_seed, r));
    results[task] = summarize(m);
    if (first_runs && r == 0) (*first_runs)[c] = std::move(m);
  };

  const std::size_t tasks = C * R;
  const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(tasks, 1))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks; ++i) run_task(i);
  } else {
    std::mutex lock;
    std::size_t next = 0;
    std::exception_ptr failure;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          std::size_t task;
          {
            std::scoped_lock guard(lock);
            if (next >= tasks || failure) return;
            task = next++;
          }
          try {
            run_task(task);
          } catch (...) {
            std::scoped_lock guard(lock);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<BatchRow> rows;
  for (std::size_t c = 0; c < C; ++c)
    rows.push_back(aggregate(controllers[c], {results.begin() + static_cast<std::ptrdiff_t>(c * R),
                                              results.begin() + static_cast<std::ptrdiff_t>((c + 1) * R)}));
  return rows;
}

ScenarioConfig apply_axis(const ScenarioConfig& config, SweepAxis axis, double value) {
  ScenarioConfig c = config;
  switch (axis) {
    case SweepAxis::control_param:
      c.control_param = value;
      break;
    case SweepAxis::num_devices:
      c.num_devices = checked_count(value, "num_devices");
      break;
    case SweepAxis::num_irs:
      c.num_irs = checked_count(value, "num_irs");
      break;
    case SweepAxis::elements_per_irs: {
      const double nx = value / c.elements_y;
      if (!(std::floor(nx) == nx) || nx < 1)
        throw ConfigError("elements_x", "N=" + std::to_string(value) + " is not a multiple of N_y=" +
                                            std::to_string(c.elements_y) + " (N_x would be non-integer)");
      c.elements_x = static_cast<int>(nx);
      break;
    }
    case SweepAxis::delay_threshold:
      c.delay_threshold = value;
      break;
    case SweepAxis::arrival_max: {
      const int a = checked_count(value, "arrival_max");
      c.arrival_max = static_cast<std::int64_t>(a) * c.arrival_unit_bits();
      break;
    }
  }
  validate(c);
  return c;
}

std::vector<SweepRow> sweep(const ScenarioConfig& config, SweepAxis axis, std::span<const double> values,
                            std::span<const ControllerKind> controllers, int num_runs, std::uint64_t base_seed,
                            int jobs) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  std::vector<ScenarioConfig> configs;
  for (double v : values) configs.push_back(apply_axis(config, axis, v));

  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (auto& batch : run_batch(configs[i], controllers, num_runs, base_seed, jobs))
      rows.push_back({values[i], std::move(batch)});
  }
  return rows;
}

}  // namespace irsopt
