#include "irsopt/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace irsopt {

double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(Vec3 a) {
  const double n = norm(a);
  if (!(n > 0.0)) throw GeometryError("cannot normalize a zero-length vector");
  return (1.0 / n) * a;
}

double distance(Vec3 a, Vec3 b) { return norm(a - b); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

namespace {

void require(bool ok, const char* key, const char* message) {
  if (!ok) throw ConfigError(key, message);
}

void validate_link(const ChannelParams& p, const std::string& prefix) {
  if (!(p.rician_factor >= 0.0) || !std::isfinite(p.rician_factor))
    throw ConfigError(prefix + ".rician_factor", "must be finite and >= 0");
  if (!(p.pathloss_exponent > 0.0) || !std::isfinite(p.pathloss_exponent))
    throw ConfigError(prefix + ".pathloss_exponent", "must be > 0");
  if (!(p.reference_loss > 0.0) || !std::isfinite(p.reference_loss))
    throw ConfigError(prefix + ".reference_loss_db", "must be finite");
  if (!(p.reference_distance > 0.0) || !std::isfinite(p.reference_distance))
    throw ConfigError(prefix + ".reference_distance_m", "must be > 0");
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

void validate(const ScenarioConfig& c) {
  require(c.num_irs >= 0, "num_irs", "must be >= 0");
  require(c.num_devices >= 1, "num_devices", "must be >= 1");
  require(c.elements_x >= 1, "elements_x", "must be >= 1");
  require(c.elements_y >= 1, "elements_y", "must be >= 1");
  require(c.phase_bits >= 1 && c.phase_bits <= 16, "phase_bits", "must lie in [1, 16]");
  require(positive_finite(c.bandwidth), "bandwidth_hz", "must be > 0");
  require(positive_finite(c.slot_duration), "slot_duration_s", "must be > 0");
  require(c.horizon >= 1, "horizon_slots", "must be >= 1");
  require(positive_finite(c.control_param), "control_param", "must be > 0");
  require(positive_finite(c.max_power), "max_power_dbm", "must describe a positive power");
  require(positive_finite(c.element_power), "element_power_dbm", "must describe a positive power");
  require(positive_finite(c.noise_density), "noise_density_dbm_per_hz", "must describe a positive density");
  require(positive_finite(c.noise_power()), "noise_density_dbm_per_hz", "noise power must be > 0");
  require(positive_finite(c.delay_threshold), "delay_threshold_s", "must be > 0");
  require(c.arrival_min >= 0, "arrival_min", "must be >= 0");
  require(c.arrival_min <= c.arrival_max, "arrival_max", "must be >= arrival_min");
  require(positive_finite(c.geometry.irs_arc_diameter), "geometry.irs_arc_diameter_m", "must be > 0");
  require(positive_finite(c.geometry.device_radius) || c.geometry.device_radius == 0.0,
          "geometry.device_radius_m", "must be >= 0");
  require(positive_finite(c.solver.tolerance), "solver.tolerance", "must be > 0");
  require(c.solver.max_outer >= 1, "solver.max_outer", "must be >= 1");
  require(c.solver.max_inner >= 1, "solver.max_inner", "must be >= 1");
  require(c.enumeration_budget >= 1, "solver.enumeration_budget", "must be >= 1");
  validate_link(c.channel.bs_irs, "channel.bs_irs");
  validate_link(c.channel.irs_device, "channel.irs_device");
  validate_link(c.channel.bs_device, "channel.bs_device");
}

ScenarioConfig default_scenario() {
  ScenarioConfig c;
  c.num_irs = 2;
  c.num_devices = 10;
  c.elements_x = 4;
  c.elements_y = 4;
  c.phase_bits = 3;
  c.bandwidth = 15e3;
  c.slot_duration = 0.01;
  c.horizon = 1000;
  c.control_param = 50.0;
  c.max_power = dbm_to_watts(20.0);
  c.element_power = dbm_to_watts(2.0);
  c.noise_density = dbm_to_watts(-170.0);
  c.delay_threshold = 0.05;
  c.arrival_unit = ArrivalUnit::bytes;
  c.arrival_min = 1 * 8;
  c.arrival_max = 150 * 8;

  const double l0 = db_to_linear(-30.0);
  c.channel.bs_irs = {1.0, 2.2, l0, 1.0};
  c.channel.irs_device = {1.0, 2.2, l0, 1.0};
  c.channel.bs_device = {0.5, 3.5, l0, 1.0};
  return c;
}

ScenarioConfig tiny_scenario() {
  ScenarioConfig c = default_scenario();
  c.num_irs = 1;
  c.elements_x = 2;
  c.elements_y = 1;
  c.phase_bits = 1;
  c.num_devices = 2;
  return c;
}

std::vector<IrsPose> irs_positions(const ScenarioConfig& config) {
  const int m_count = config.num_irs;
  const double radius = 0.5 * config.geometry.irs_arc_diameter;
  const Vec3 center = config.geometry.irs_arc_center;
  const Vec3 x_axis{1.0, 0.0, 0.0};

  std::vector<IrsPose> poses;
  poses.reserve(static_cast<std::size_t>(std::max(m_count, 0)));
  for (int m = 1; m <= m_count; ++m) {
    const double angle = std::numbers::pi * m / (m_count + 1);
    IrsPose pose;
    pose.position = center + Vec3{0.0, radius * std::cos(angle), radius * std::sin(angle)};
    pose.normal = normalized(Vec3{} - pose.position);
    pose.horizontal = x_axis;
    pose.vertical = cross(pose.normal, pose.horizontal);
    poses.push_back(pose);
  }
  return poses;
}

std::vector<Vec3> sample_device_positions(const ScenarioConfig& config, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec3 c = config.geometry.device_center;
  const double radius = config.geometry.device_radius;

  std::vector<Vec3> points;
  points.reserve(static_cast<std::size_t>(config.num_devices));
  for (int k = 0; k < config.num_devices; ++k) {
    const double r = radius * std::sqrt(unit(rng));
    const double a = 2.0 * std::numbers::pi * unit(rng);
    points.push_back({c.x + r * std::cos(a), 0.0, c.z + r * std::sin(a)});
  }
  return points;
}

Deployment make_deployment(const ScenarioConfig& config, Rng& rng) {
  Deployment d;
  d.bs = config.geometry.bs;
  d.irs = irs_positions(config);
  d.devices = sample_device_positions(config, rng);
  for (const auto& dev : d.devices) {
    if (!(distance(dev, d.bs) > 0.0)) throw GeometryError("device coincides with the base station");
    for (const auto& s : d.irs)
      if (!(distance(dev, s.position) > 0.0)) throw GeometryError("device coincides with an IRS");
  }
  return d;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace irsopt
