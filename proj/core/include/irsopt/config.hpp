#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace irsopt {

/// Engine used by every stochastic component. Streams are derived per
/// purpose (see derive_seed) so controllers can share common random numbers.
using Rng = std::mt19937_64;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double dot(Vec3 a, Vec3 b);
Vec3 cross(Vec3 a, Vec3 b);
double norm(Vec3 a);
Vec3 normalized(Vec3 a);
double distance(Vec3 a, Vec3 b);

// Unit conversions. Everything inside the library is linear SI.
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

/// Large-scale and fading parameters of one link class.
struct ChannelParams {
  double rician_factor = 1.0;      // epsilon, power ratio LOS/NLOS
  double pathloss_exponent = 2.2;  // iota
  double reference_loss = 1e-3;    // L0 as a linear power gain at reference_distance
  double reference_distance = 1.0; // D0, meters
};

struct LinkClasses {
  ChannelParams bs_irs;
  ChannelParams irs_device;
  ChannelParams bs_device;
};

struct Geometry {
  Vec3 bs{-200.0, 0.0, 0.0};
  Vec3 irs_arc_center{0.0, 0.0, 0.0};
  double irs_arc_diameter = 10.0;
  Vec3 device_center{0.0, 0.0, 200.0};
  double device_radius = 100.0;
};

struct SolverSettings {
  double tolerance = 1e-4;  // xi
  int max_outer = 30;       // I_out
  int max_inner = 30;       // I_v
};

enum class ArrivalUnit { bits, bytes };

struct ScenarioConfig {
  int num_irs = 2;       // M; 0 describes a deployment without any surface
  int num_devices = 10;  // K
  int elements_x = 4;    // N_x
  int elements_y = 4;    // N_y
  int phase_bits = 3;    // b

  double bandwidth = 15e3;     // Hz per subcarrier
  double slot_duration = 0.01; // s
  int horizon = 1000;          // slots
  double control_param = 50.0; // V

  double max_power = 0.1;          // W per device
  double element_power = 0.0;      // W per IRS element
  double noise_density = 0.0;      // W/Hz
  double delay_threshold = 0.05;   // s per device

  std::int64_t arrival_min = 8;    // bits per slot
  std::int64_t arrival_max = 1200; // bits per slot
  ArrivalUnit arrival_unit = ArrivalUnit::bytes;  // unit used by the config file

  Geometry geometry;
  LinkClasses channel;
  SolverSettings solver;
  std::uint64_t enumeration_budget = std::uint64_t{1} << 20;
  std::uint64_t rng_seed = 1;

  int elements_per_irs() const { return elements_x * elements_y; }
  int total_elements() const { return num_irs * elements_per_irs(); }
  int phase_levels() const { return 1 << phase_bits; }
  double noise_power() const { return noise_density * bandwidth; }
  /// Static IRS power M*N*P_I.
  double irs_static_power() const { return static_cast<double>(total_elements()) * element_power; }
  /// Bits per configured arrival unit.
  std::int64_t arrival_unit_bits() const { return arrival_unit == ArrivalUnit::bytes ? 8 : 1; }
};

/// Throws ConfigError naming the offending field.
void validate(const ScenarioConfig& config);

ScenarioConfig default_scenario();

/// Smallest configuration used by the exhaustive-search comparisons:
/// M=1, N_x=2, N_y=1, b=1, K=2 on the default geometry.
ScenarioConfig tiny_scenario();

struct IrsPose {
  Vec3 position;
  Vec3 normal;      // unit vector the surface faces
  Vec3 horizontal;  // in-plane axis indexed by N_x
  Vec3 vertical;    // in-plane axis indexed by N_y
};

/// Surfaces at angles pi*m/(M+1), m=1..M, on a half circle of the
/// configured diameter in the y-z plane, each facing the origin.
std::vector<IrsPose> irs_positions(const ScenarioConfig& config);

/// Uniform draws over the device disk in the x-z plane.
std::vector<Vec3> sample_device_positions(const ScenarioConfig& config, Rng& rng);

struct Deployment {
  Vec3 bs;
  std::vector<IrsPose> irs;
  std::vector<Vec3> devices;
};

Deployment make_deployment(const ScenarioConfig& config, Rng& rng);

/// SplitMix64 finalizer over (seed, stream); used to derive independent
/// engine seeds for runs and per-purpose streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace irsopt
