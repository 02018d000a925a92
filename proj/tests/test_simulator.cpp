#include <doctest.h>

#include <cmath>

#include "irsopt/simulator.hpp"

using namespace irsopt;

namespace {

ScenarioConfig short_scenario(int horizon = 60) {
  ScenarioConfig c = default_scenario();
  c.horizon = horizon;
  return c;
}

bool same(const RunMetrics& a, const RunMetrics& b) {
  return a.total_power == b.total_power && a.objective == b.objective && a.iterations == b.iterations &&
         a.transmit_power == b.transmit_power && a.backlog == b.backlog && a.delay_backlog == b.delay_backlog &&
         a.avg_arrival == b.avg_arrival && a.delay == b.delay && a.convergence == b.convergence;
}

}  // namespace

TEST_CASE("controller names") {
  for (auto k : {ControllerKind::proposed, ControllerKind::random_phase, ControllerKind::without_irs,
                 ControllerKind::exhaustive})
    CHECK(parse_controller(to_string(k)) == k);
  CHECK_FALSE(parse_controller("greedy"));
  CHECK(controller_names() == "proposed, random_phase, without_irs, exhaustive");
  CHECK(parse_axis("d_th") == SweepAxis::delay_threshold);
  CHECK_FALSE(parse_axis("L"));
}

TEST_CASE("one slot") {
  const ScenarioConfig c = short_scenario(1);
  const RunMetrics m = run_episode(c, {ControllerKind::proposed, c.solver}, 5);
  REQUIRE(m.total_power.size() == 1);
  REQUIRE(m.backlog.size() == 10);
  for (int k = 0; k < 10; ++k) {
    const double expected = std::max(m.at(m.arrival, 0, k) - m.at(m.served, 0, k), 0.0);
    CHECK(m.at(m.backlog, 0, k) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(m.at(m.avg_arrival, 0, k) == m.at(m.arrival, 0, k));
  }
}

TEST_CASE("idle system transmits nothing") {
  ScenarioConfig c = short_scenario(20);
  c.arrival_min = c.arrival_max = 0;
  const RunMetrics m = run_episode(c, {ControllerKind::proposed, c.solver}, 5);
  for (double p : m.transmit_power) CHECK(p == 0.0);
  for (double P : m.total_power) CHECK(P == doctest::Approx(c.irs_static_power()));
}

TEST_CASE("episodes are reproducible") {
  const ScenarioConfig c = short_scenario();
  for (auto kind : {ControllerKind::proposed, ControllerKind::random_phase, ControllerKind::without_irs}) {
    const RunMetrics a = run_episode(c, {kind, c.solver}, 77);
    const RunMetrics b = run_episode(c, {kind, c.solver}, 77);
    CHECK(same(a, b));
    CHECK_FALSE(same(a, run_episode(c, {kind, c.solver}, 78)));
  }
}

TEST_CASE("power accounting") {
  const ScenarioConfig c = short_scenario();
  const RunMetrics with = run_episode(c, {ControllerKind::proposed, c.solver}, 3);
  const RunMetrics without = run_episode(c, {ControllerKind::without_irs, c.solver}, 3);
  for (int t = 0; t < c.horizon; ++t) {
    double a = 0, b = 0;
    for (int k = 0; k < c.num_devices; ++k) {
      a += with.at(with.transmit_power, t, k);
      b += without.at(without.transmit_power, t, k);
    }
    CHECK(with.total_power[static_cast<std::size_t>(t)] == doctest::Approx(a + c.irs_static_power()).epsilon(1e-14));
    CHECK(without.total_power[static_cast<std::size_t>(t)] == doctest::Approx(b).epsilon(1e-14));
  }
  // common random numbers: both see the same arrivals
  CHECK(with.arrival == without.arrival);
}

TEST_CASE("state invariants over an episode") {
  const ScenarioConfig c = short_scenario(200);
  const RunMetrics m = run_episode(c, {ControllerKind::proposed, c.solver}, 11);
  CHECK(m.wall_clock_s.size() == 200);
  CHECK(m.convergence.size() == 200);
  for (std::size_t i = 0; i < m.backlog.size(); ++i) {
    CHECK_FALSE(m.backlog[i] < 0.0);
    CHECK_FALSE(m.delay_backlog[i] < 0.0);
    CHECK_FALSE(m.transmit_power[i] < 0.0);
    CHECK_FALSE(m.transmit_power[i] > c.max_power);
  }
  for (int k = 0; k < c.num_devices; ++k) {
    double arrived = 0, served = 0;
    for (int t = 0; t < c.horizon; ++t) {
      arrived += m.at(m.arrival, t, k);
      served += m.at(m.served, t, k);
      CHECK(m.at(m.delay, t, k) == doctest::Approx(m.at(m.backlog, t, k) / m.at(m.avg_arrival, t, k) * c.slot_duration));
    }
    CHECK(std::abs(m.at(m.backlog, c.horizon - 1, k) - (arrived - served)) <= 1e-9);
  }
}

TEST_CASE("summary statistics are recomputable from the traces") {
  const ScenarioConfig c = short_scenario(100);
  const RunMetrics m = run_episode(c, {ControllerKind::random_phase, c.solver}, 12);
  const EpisodeSummary s = summarize(m, 0.2);
  double p = 0;
  for (int t = 20; t < 100; ++t) p += m.total_power[static_cast<std::size_t>(t)];
  CHECK(s.mean_power_w == doctest::Approx(p / 80).epsilon(1e-9));
  double dq = 0;
  for (int t = 20; t < 100; ++t)
    for (int k = 0; k < 10; ++k) dq += m.at(m.delay_backlog, t, k);
  CHECK(s.mean_dqueue == doctest::Approx(dq / 800).epsilon(1e-9));
  CHECK(s.max_device_delay_s >= s.mean_delay_s);
}

TEST_CASE("exhaustive controller is limited to small scenarios") {
  const ScenarioConfig c = short_scenario(5);
  CHECK_THROWS_AS(run_episode(c, {ControllerKind::exhaustive, c.solver}, 1), SimulationError);
  try {
    run_episode(c, {ControllerKind::exhaustive, c.solver}, 1);
  } catch (const SimulationError& e) {
    CHECK(e.slot() == 1);
  }
  ScenarioConfig tiny = tiny_scenario();
  tiny.horizon = 30;
  const RunMetrics ex = run_episode(tiny, {ControllerKind::exhaustive, tiny.solver}, 2);
  const RunMetrics pr = run_episode(tiny, {ControllerKind::proposed, tiny.solver}, 2);
  CHECK(ex.objective[0] <= pr.objective[0] + 1e-12);
}

TEST_CASE("batch aggregation") {
  const ScenarioConfig c = short_scenario(50);
  const std::vector<ControllerKind> ctl{ControllerKind::proposed, ControllerKind::without_irs};
  std::vector<RunMetrics> first;
  const auto rows = run_batch(c, ctl, 3, 9, 1, &first);
  REQUIRE(rows.size() == 2);
  REQUIRE(first.size() == 2);
  CHECK(rows[0].runs == 3);
  const EpisodeSummary s0 = summarize(run_episode(c, {ControllerKind::proposed, c.solver}, run_seed(9, 0)));
  CHECK(rows[0].per_run[0].mean_power_w == s0.mean_power_w);
  CHECK(summarize(first[0]).mean_power_w == s0.mean_power_w);
  double mean = 0;
  for (const auto& s : rows[1].per_run) mean += s.mean_power_w;
  CHECK(rows[1].mean_power_w == doctest::Approx(mean / 3));

  const auto one = run_batch(c, ctl, 1, 9);
  CHECK(one[0].mean_power_w == s0.mean_power_w);
  CHECK(one[0].std_power_w == 0.0);

  const auto threaded = run_batch(c, ctl, 3, 9, 3);
  CHECK(threaded[0].mean_power_w == rows[0].mean_power_w);
  CHECK(threaded[1].std_power_w == rows[1].std_power_w);
  CHECK_THROWS(run_batch(c, ctl, 0, 9));
}

TEST_CASE("sweep axes") {
  const ScenarioConfig c = short_scenario(30);
  CHECK(apply_axis(c, SweepAxis::control_param, 500).control_param == 500);
  CHECK(apply_axis(c, SweepAxis::num_devices, 16).num_devices == 16);
  CHECK(apply_axis(c, SweepAxis::num_irs, 3).num_irs == 3);
  CHECK(apply_axis(c, SweepAxis::elements_per_irs, 20).elements_x == 5);
  CHECK_THROWS_WITH_AS(apply_axis(c, SweepAxis::elements_per_irs, 30), doctest::Contains("not a multiple"), ConfigError);
  CHECK(apply_axis(c, SweepAxis::delay_threshold, 0.08).delay_threshold == 0.08);
  CHECK(apply_axis(c, SweepAxis::arrival_max, 200).arrival_max == 1600);
  CHECK_THROWS_AS(apply_axis(c, SweepAxis::num_devices, 2.5), ConfigError);

  const std::vector<ControllerKind> ctl{ControllerKind::proposed, ControllerKind::random_phase};
  const std::vector<double> ks{4, 8, 12, 16};
  const auto rows = sweep(c, SweepAxis::num_devices, ks, ctl, 1, 3);
  CHECK(rows.size() == 8);
  const std::vector<double> single{50};
  const auto one = sweep(c, SweepAxis::control_param, single, ctl, 2, 3);
  const auto batch = run_batch(c, ctl, 2, 3);
  CHECK(one[0].batch.mean_power_w == batch[0].mean_power_w);
  CHECK(one[1].batch.mean_power_w == batch[1].mean_power_w);
}

TEST_CASE("channel replay reproduces the run") {
  const ScenarioConfig c = short_scenario(20);
  EpisodeOptions rec;
  rec.record_channels = true;
  const RunMetrics a = run_episode(c, {ControllerKind::proposed, c.solver}, 4, rec);
  REQUIRE(a.channels.size() == 20);
  EpisodeOptions rep;
  rep.replay = a.channels;
  const RunMetrics b = run_episode(c, {ControllerKind::proposed, c.solver}, 4, rep);
  CHECK(same(a, b));
  rep.replay = std::span(a.channels).first(10);
  CHECK_THROWS_AS(run_episode(c, {ControllerKind::proposed, c.solver}, 4, rep), SimulationError);
}
