#include "irsopt/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "irsopt/config_io.hpp"
#include "irsopt/csv_io.hpp"
#include "irsopt/oracle_suite.hpp"
#include "irsopt/simulator.hpp"

namespace irsopt::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config = "default";
  std::string out = "out";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string controllers = "proposed,random_phase,without_irs";
  std::string axis;
  std::string values;
  int runs = 1;
  int jobs = 1;
  int trials = 100;
  int slots = 100;
  std::string channel_trace;
  std::string replay;
};

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<ControllerKind> parse_controllers(const std::string& list) {
  std::vector<ControllerKind> out;
  for (const auto& name : split(list)) {
    const auto kind = parse_controller(name);
    if (!kind) throw UsageError("unknown controller '" + name + "'; valid controllers: " + controller_names());
    out.push_back(*kind);
  }
  if (out.empty()) throw UsageError("no controllers given; valid controllers: " + controller_names());
  return out;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  for (const auto& item : split(list)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw UsageError("--values: '" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--values needs at least one number");
  return out;
}

ScenarioConfig load(const Options& o) {
  ScenarioConfig c = load_config(o.config, o.overrides);
  if (o.seed) c.rng_seed = *o.seed;
  return c;
}

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

void print_rows(std::ostream& out, std::span<const BatchRow> rows, const std::string& prefix = {}) {
  char line[256];
  std::snprintf(line, sizeof line, "%s%-14s %5s %14s %10s %12s %12s %12s\n", prefix.c_str(), "controller", "runs",
                "power [W]", "[dBm]", "std [W]", "D queue", "delay [s]");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%s%-14s %5d %14.6g %10.3f %12.4g %12.4g %12.4g\n", prefix.c_str(),
                  std::string(to_string(r.controller)).c_str(), r.runs, r.mean_power_w,
                  r.mean_power_w > 0 ? watts_to_dbm(r.mean_power_w) : -INFINITY, r.std_power_w, r.mean_dqueue,
                  r.mean_delay_s);
    out << line;
  }
}

int cmd_run(const Options& o, std::ostream& out) {
  const ScenarioConfig c = load(o);
  const auto controllers = parse_controllers(o.controllers);
  const fs::path dir = o.out;

  std::vector<BatchRow> rows;
  std::vector<RunMetrics> first;
  if (!o.replay.empty() || !o.channel_trace.empty()) {
    if (o.runs != 1) throw UsageError("--replay and --channel-trace need --runs 1");
    std::vector<ChannelSlot> replay;
    if (!o.replay.empty()) {
      std::ifstream in(o.replay, std::ios::binary);
      if (!in) throw UsageError("cannot read " + o.replay);
      replay = read_channel_trace(in);
    }
    for (auto kind : controllers) {
      EpisodeOptions opts;
      opts.record_channels = !o.channel_trace.empty();
      opts.replay = replay;
      first.push_back(run_episode(c, {kind, c.solver}, run_seed(c.rng_seed, 0), opts));
      rows.push_back(aggregate(kind, {summarize(first.back())}));
    }
    if (!o.channel_trace.empty()) {
      auto f = open_out(o.channel_trace);
      write_channel_trace(f, first.front().channels);
    }
  } else {
    rows = run_batch(c, controllers, o.runs, c.rng_seed, o.jobs, &first);
  }

  for (std::size_t i = 0; i < controllers.size(); ++i) {
    const std::string name(to_string(controllers[i]));
    auto slot = open_out(dir / ("trace_" + name + ".csv"));
    write_slot_trace(slot, first[i]);
    auto state = open_out(dir / ("state_" + name + ".csv"));
    write_state_trace(state, first[i]);
  }
  auto summary = open_out(dir / "summary.csv");
  write_summary(summary, rows);
  print_rows(out, rows);
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const ScenarioConfig c = load(o);
  const auto controllers = parse_controllers(o.controllers);
  const auto axis = parse_axis(o.axis);
  if (!axis) throw UsageError("unknown axis '" + o.axis + "'; valid axes: " + axis_names());
  const auto values = parse_values(o.values);

  const auto rows = sweep(c, *axis, values, controllers, o.runs, c.rng_seed, o.jobs);
  const std::string name(to_string(*axis));
  auto table = open_out(fs::path(o.out) / ("sweep_" + name + ".csv"));
  write_sweep_table(table, rows);
  auto plot = open_out(fs::path(o.out) / ("plot_" + name + ".csv"));
  write_plot_data(plot, *axis, rows);

  for (double v : values) {
    std::vector<BatchRow> at;
    for (const auto& r : rows)
      if (r.value == v) at.push_back(r.batch);
    out << name << " = " << format_number(v) << '\n';
    print_rows(out, at, "  ");
  }
  return kExitOk;
}

int cmd_oracle_check(const Options& o, std::ostream& out) {
  ScenarioConfig c = o.config == "default" ? tiny_scenario() : load_config(o.config);
  if (!o.overrides.empty()) c = apply_overrides(c, o.overrides);
  if (o.seed) c.rng_seed = *o.seed;
  if (o.trials < 1) throw UsageError("--trials must be >= 1");

  std::vector<oracle::CheckResult> results;
  try {
    results = oracle::run_suite(c, o.trials, c.rng_seed);
  } catch (const EnumerationBudgetError& e) {
    throw UsageError(std::string("refusing oracle check: ") + e.what());
  }
  bool ok = true;
  char line[256];
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%s  %-48s worst %-12.4g tol %-8.2g n=%d\n", r.passed ? "PASS" : "FAIL",
                  r.name.c_str(), r.worst, r.tolerance, r.trials);
    out << line;
    ok = ok && r.passed;
  }
  if (!ok) {
    out << "failing properties:";
    for (const auto& r : results)
      if (!r.passed) out << "\n  " << r.name << " (" << r.detail << ")";
    out << '\n';
    return kExitFailure;
  }
  out << "all oracle checks passed\n";
  return kExitOk;
}

int cmd_convergence(const Options& o, std::ostream& out) {
  ScenarioConfig c = load(o);
  const auto values = parse_values(o.values.empty() ? "5,10,15" : o.values);
  if (o.slots < 1) throw UsageError("--slots must be >= 1");
  c.horizon = o.slots;

  std::vector<ConvergenceSeries> series;
  for (double k : values) {
    const ScenarioConfig ck = apply_axis(c, SweepAxis::num_devices, k);
    const RunMetrics m = run_episode(ck, {ControllerKind::proposed, ck.solver}, run_seed(ck.rng_seed, 0));
    series.push_back({"K=" + format_number(k), m.convergence.back()});
    out << series.back().label << ": " << series.back().objective.size() - 1 << " outer iterations, objective "
        << format_number(series.back().objective.back()) << '\n';
  }
  auto f = open_out(fs::path(o.out) / "convergence.csv");
  write_convergence(f, series);
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const ScenarioConfig c = load(o);
  out << config_to_text(c) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-IRS uplink power minimization simulator"};
  app.require_subcommand(1);
  Options o;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "scenario JSON file, or 'default'");
    sub->add_option("--set", o.overrides, "override as dotted.key=value (repeatable)");
    sub->add_option("--seed", o.seed, "base seed (replaces the config seed)");
  };

  auto* run = app.add_subcommand("run", "simulate controllers and write traces plus a summary");
  add_config(run);
  run->add_option("--out", o.out, "output directory");
  run->add_option("--controllers", o.controllers, "comma-separated controller list");
  run->add_option("--runs", o.runs, "independent episodes per controller")->check(CLI::PositiveNumber);
  run->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--channel-trace", o.channel_trace, "write run-0 channels of the first controller to this file");
  run->add_option("--replay", o.replay, "read channels from a trace instead of drawing them");

  auto* sw = app.add_subcommand("sweep", "batch runs over one scenario axis");
  add_config(sw);
  sw->add_option("--out", o.out, "output directory");
  sw->add_option("--controllers", o.controllers, "comma-separated controller list");
  sw->add_option("--axis", o.axis, "one of " + axis_names())->required();
  sw->add_option("--values", o.values, "comma-separated axis values")->required();
  sw->add_option("--runs", o.runs, "independent episodes per point")->check(CLI::PositiveNumber);
  sw->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* oc = app.add_subcommand("oracle-check", "compare the solvers against brute-force references");
  add_config(oc);
  oc->add_option("--trials", o.trials, "instances per property");

  auto* conv = app.add_subcommand("convergence", "per-slot objective traces of the alternating solver");
  add_config(conv);
  conv->add_option("--out", o.out, "output directory");
  conv->add_option("--values", o.values, "device counts, default 5,10,15");
  conv->add_option("--slots", o.slots, "slots simulated before the traced slot");

  auto* val = app.add_subcommand("validate-config", "parse a scenario and print it in canonical form");
  add_config(val);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(o, out);
    if (*sw) return cmd_sweep(o, out);
    if (*oc) return cmd_oracle_check(o, out);
    if (*conv) return cmd_convergence(o, out);
    if (*val) return cmd_validate(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace irsopt::cli
