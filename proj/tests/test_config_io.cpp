#include <doctest.h>

#include <string>
#include <vector>

#include "irsopt/config_io.hpp"

using namespace irsopt;

TEST_CASE("empty object gives the defaults") {
  const ScenarioConfig c = parse_config("{}");
  const ScenarioConfig d = default_scenario();
  CHECK(c.num_devices == d.num_devices);
  CHECK(c.max_power == d.max_power);
  CHECK(c.arrival_max == d.arrival_max);
}

TEST_CASE("canonical text round trips") {
  ScenarioConfig d = default_scenario();
  d.num_devices = 12;
  d.channel.bs_device.reference_loss = 1e-4;
  d.geometry.device_radius = 50.0;
  d.rng_seed = 99;
  const std::string text = config_to_text(d);
  const ScenarioConfig c = parse_config(text);
  CHECK(config_to_text(c) == text);
  CHECK(c.num_devices == 12);
  CHECK(c.channel.bs_device.reference_loss == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(c.rng_seed == 99);
}

TEST_CASE("units on load") {
  const ScenarioConfig c = parse_config(R"({"max_power_w": 0.2, "element_power_dbm": 0,
                                            "noise_density_dbm_per_hz": -174})");
  CHECK(c.max_power == doctest::Approx(0.2));
  CHECK(c.element_power == doctest::Approx(1e-3));
  CHECK(c.noise_density == doctest::Approx(3.98e-21).epsilon(1e-3));
  CHECK_THROWS_AS(parse_config(R"({"max_power_w": 0.2, "max_power_dbm": 20})"), ConfigError);
}

TEST_CASE("arrival unit") {
  const ScenarioConfig bytes = parse_config(R"({"arrival_min": 1, "arrival_max": 150})");
  CHECK(bytes.arrival_min == 8);
  CHECK(bytes.arrival_max == 1200);
  const ScenarioConfig bits = parse_config(R"({"arrival_unit": "bits", "arrival_min": 1, "arrival_max": 150})");
  CHECK(bits.arrival_min == 1);
  CHECK(bits.arrival_max == 150);
  const ScenarioConfig bits_default = parse_config(R"({"arrival_unit": "bits"})");
  CHECK(bits_default.arrival_max == 1200);
  CHECK_THROWS_AS(parse_config(R"({"arrival_unit": "nibbles"})"), ConfigError);
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"num_device": 3})"), doctest::Contains("num_device"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"channel": {"bs_irs": {"k": 1}}})"),
                       doctest::Contains("channel.bs_irs.k"), ConfigError);
}

TEST_CASE("type and range errors name the key") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"num_devices": 2.5})"), doctest::Contains("num_devices"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"phase_bits": 0})"), doctest::Contains("phase_bits"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"geometry": {"bs_m": [1, 2]}})"), doctest::Contains("geometry.bs_m"),
                       ConfigError);
}

TEST_CASE("syntax errors report line and column") {
  const std::string text = "{\n  \"num_devices\": 4,\n  \"phase_bits\": ,\n}";
  CHECK_THROWS_WITH_AS(parse_config(text, {}, "scenario.json"), doctest::Contains("scenario.json:3:"), ConfigError);
}

TEST_CASE("overrides") {
  const std::vector<std::string> ok{"control_param=500", "channel.bs_device.reference_loss_db=-40", "solver.max_outer=5"};
  const ScenarioConfig c = apply_overrides(default_scenario(), ok);
  CHECK(c.control_param == 500.0);
  CHECK(c.channel.bs_device.reference_loss == doctest::Approx(1e-4));
  CHECK(c.channel.bs_irs.reference_loss == doctest::Approx(1e-3));
  CHECK(c.solver.max_outer == 5);

  const std::vector<std::string> unknown{"solver.max_outr=5"};
  CHECK_THROWS_WITH_AS(apply_overrides(default_scenario(), unknown), doctest::Contains("solver.max_outr"), ConfigError);
  const std::vector<std::string> section{"solver=3"};
  CHECK_THROWS_AS(apply_overrides(default_scenario(), section), ConfigError);
  const std::vector<std::string> malformed{"control_param"};
  CHECK_THROWS_AS(apply_overrides(default_scenario(), malformed), ConfigError);
  const std::vector<std::string> text_value{"arrival_unit=bits"};
  CHECK(apply_overrides(default_scenario(), text_value).arrival_unit == ArrivalUnit::bits);
}

TEST_CASE("the default keyword and missing files") {
  CHECK(load_config("default").num_devices == 10);
  CHECK_THROWS_AS(load_config("/nonexistent/scenario.json"), ConfigError);
}
