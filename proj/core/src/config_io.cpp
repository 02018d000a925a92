#include "irsopt/config_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace irsopt {

using nlohmann::json;

namespace {

json vec3_to_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }

json link_to_json(const ChannelParams& p) {
  return {{"rician_factor", p.rician_factor},
          {"pathloss_exponent", p.pathloss_exponent},
          {"reference_loss_db", linear_to_db(p.reference_loss)},
          {"reference_distance_m", p.reference_distance}};
}

json to_json(const ScenarioConfig& c) {
  const auto unit_bits = c.arrival_unit_bits();
  json j;
  j["num_irs"] = c.num_irs;
  j["num_devices"] = c.num_devices;
  j["elements_x"] = c.elements_x;
  j["elements_y"] = c.elements_y;
  j["phase_bits"] = c.phase_bits;
  j["bandwidth_hz"] = c.bandwidth;
  j["slot_duration_s"] = c.slot_duration;
  j["horizon_slots"] = c.horizon;
  j["control_param"] = c.control_param;
  j["max_power_dbm"] = watts_to_dbm(c.max_power);
  j["element_power_dbm"] = watts_to_dbm(c.element_power);
  j["noise_density_dbm_per_hz"] = watts_to_dbm(c.noise_density);
  j["delay_threshold_s"] = c.delay_threshold;
  j["arrival_unit"] = c.arrival_unit == ArrivalUnit::bytes ? "bytes" : "bits";
  j["arrival_min"] = c.arrival_min / unit_bits;
  j["arrival_max"] = c.arrival_max / unit_bits;
  j["seed"] = c.rng_seed;
  j["geometry"] = {{"bs_m", vec3_to_json(c.geometry.bs)},
                   {"irs_arc_center_m", vec3_to_json(c.geometry.irs_arc_center)},
                   {"irs_arc_diameter_m", c.geometry.irs_arc_diameter},
                   {"device_center_m", vec3_to_json(c.geometry.device_center)},
                   {"device_radius_m", c.geometry.device_radius}};
  j["channel"] = {{"bs_irs", link_to_json(c.channel.bs_irs)},
                  {"irs_device", link_to_json(c.channel.irs_device)},
                  {"bs_device", link_to_json(c.channel.bs_device)}};
  j["solver"] = {{"tolerance", c.solver.tolerance},
                 {"max_outer", c.solver.max_outer},
                 {"max_inner", c.solver.max_inner},
                 {"enumeration_budget", c.enumeration_budget}};
  return j;
}

// Reads typed values out of one JSON object and remembers which keys were
// consumed so leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string prefix) : object_(object), prefix_(std::move(prefix)) {
    if (!object_.is_object()) throw ConfigError(prefix_.empty() ? "<root>" : prefix_, "expected an object");
  }

  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(path(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) throw ConfigError(path(key), "must be finite");
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = find(key)) {
      if (v->is_number_integer() || v->is_number_unsigned()) {
        if constexpr (std::is_unsigned_v<Int>) {
          if (v->is_number_integer() && v->get<std::int64_t>() < 0)
            throw ConfigError(path(key), "must be non-negative");
        }
        out = v->get<Int>();
        return;
      }
      if (v->is_number_float()) {
        const double d = v->get<double>();
        if (std::floor(d) == d && std::abs(d) < 9e15) {
          out = static_cast<Int>(d);
          return;
        }
      }
      throw ConfigError(path(key), "expected an integer");
    }
  }

  // Accepts `<stem>_dbm` or `<stem>_w`, never both.
  void power(const std::string& stem, double& watts) {
    const json* dbm = find(stem + "_dbm");
    const json* w = find(stem + "_w");
    if (dbm && w) throw ConfigError(path(stem), "give either _dbm or _w, not both");
    if (dbm) {
      if (!dbm->is_number()) throw ConfigError(path(stem + "_dbm"), "expected a number");
      watts = dbm_to_watts(dbm->get<double>());
    } else if (w) {
      if (!w->is_number()) throw ConfigError(path(stem + "_w"), "expected a number");
      watts = w->get<double>();
    }
  }

  void vec3(const std::string& key, Vec3& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != 3 || !std::all_of(v->begin(), v->end(), [](const json& e) {
            return e.is_number();
          }))
        throw ConfigError(path(key), "expected [x, y, z] in meters");
      out = {(*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<double>()};
    }
  }

  void finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it)
      if (!seen_.contains(it.key())) throw ConfigError(path(it.key()), "unknown key");
  }

 private:
  const json& object_;
  std::string prefix_;
  std::set<std::string> seen_;
};

void read_link(ObjectReader& parent, const std::string& key, ChannelParams& p) {
  const json* node = parent.find(key);
  if (!node) return;
  ObjectReader r(*node, parent.path(key));
  r.number("rician_factor", p.rician_factor);
  r.number("pathloss_exponent", p.pathloss_exponent);
  double l0_db = linear_to_db(p.reference_loss);
  r.number("reference_loss_db", l0_db);
  p.reference_loss = db_to_linear(l0_db);
  r.number("reference_distance_m", p.reference_distance);
  r.finish();
}

ScenarioConfig from_json(const json& root) {
  ScenarioConfig c = default_scenario();
  ObjectReader r(root, "");
  r.integer("num_irs", c.num_irs);
  r.integer("num_devices", c.num_devices);
  r.integer("elements_x", c.elements_x);
  r.integer("elements_y", c.elements_y);
  r.integer("phase_bits", c.phase_bits);
  r.number("bandwidth_hz", c.bandwidth);
  r.number("slot_duration_s", c.slot_duration);
  r.integer("horizon_slots", c.horizon);
  r.number("control_param", c.control_param);
  r.power("max_power", c.max_power);
  r.power("element_power", c.element_power);
  {
    const json* dbm = r.find("noise_density_dbm_per_hz");
    const json* w = r.find("noise_density_w_per_hz");
    if (dbm && w) throw ConfigError("noise_density", "give either _dbm_per_hz or _w_per_hz, not both");
    if (dbm) {
      if (!dbm->is_number()) throw ConfigError("noise_density_dbm_per_hz", "expected a number");
      c.noise_density = dbm_to_watts(dbm->get<double>());
    } else if (w) {
      if (!w->is_number()) throw ConfigError("noise_density_w_per_hz", "expected a number");
      c.noise_density = w->get<double>();
    }
  }
  r.number("delay_threshold_s", c.delay_threshold);

  if (const json* unit = r.find("arrival_unit")) {
    if (*unit == "bytes") {
      c.arrival_unit = ArrivalUnit::bytes;
    } else if (*unit == "bits") {
      c.arrival_unit = ArrivalUnit::bits;
    } else {
      throw ConfigError("arrival_unit", "expected \"bits\" or \"bytes\"");
    }
  }
  std::int64_t a_min = default_scenario().arrival_min / c.arrival_unit_bits();
  std::int64_t a_max = default_scenario().arrival_max / c.arrival_unit_bits();
  r.integer("arrival_min", a_min);
  r.integer("arrival_max", a_max);
  c.arrival_min = a_min * c.arrival_unit_bits();
  c.arrival_max = a_max * c.arrival_unit_bits();
  r.integer("seed", c.rng_seed);

  if (const json* g = r.find("geometry")) {
    ObjectReader gr(*g, "geometry");
    gr.vec3("bs_m", c.geometry.bs);
    gr.vec3("irs_arc_center_m", c.geometry.irs_arc_center);
    gr.number("irs_arc_diameter_m", c.geometry.irs_arc_diameter);
    gr.vec3("device_center_m", c.geometry.device_center);
    gr.number("device_radius_m", c.geometry.device_radius);
    gr.finish();
  }
  if (const json* ch = r.find("channel")) {
    ObjectReader cr(*ch, "channel");
    read_link(cr, "bs_irs", c.channel.bs_irs);
    read_link(cr, "irs_device", c.channel.irs_device);
    read_link(cr, "bs_device", c.channel.bs_device);
    cr.finish();
  }
  if (const json* s = r.find("solver")) {
    ObjectReader sr(*s, "solver");
    sr.number("tolerance", c.solver.tolerance);
    sr.integer("max_outer", c.solver.max_outer);
    sr.integer("max_inner", c.solver.max_inner);
    sr.integer("enumeration_budget", c.enumeration_budget);
    sr.finish();
  }
  r.finish();
  validate(c);
  return c;
}

json parse_value(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return json(text);
  return v;
}

void apply_override(json& tree, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(assignment, "override must look like dotted.key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json* node = &tree;
  std::string::size_type start = 0;
  while (true) {
    const auto dot_pos = key.find('.', start);
    const std::string part = key.substr(start, dot_pos - start);
    if (!node->is_object() || !node->contains(part)) throw ConfigError(key, "override references an unknown key");
    node = &(*node)[part];
    if (dot_pos == std::string::npos) break;
    start = dot_pos + 1;
  }
  if (node->is_object()) throw ConfigError(key, "cannot override a whole section");
  *node = parse_value(value);
}

std::string describe_parse_error(std::string_view text, std::size_t byte, std::string_view source,
                                 const std::string& what) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  std::ostringstream os;
  os << source << ":" << line << ":" << column << ": " << what;
  return os.str();
}

}  // namespace

ScenarioConfig parse_config(std::string_view text, std::span<const std::string> overrides,
                            std::string_view source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", describe_parse_error(text, e.byte, source, "invalid JSON"));
  }
  ScenarioConfig c;
  try {
    c = from_json(root);
  } catch (const json::exception& e) {
    throw ConfigError("", std::string(source) + ": " + e.what());
  }
  return overrides.empty() ? c : apply_overrides(c, overrides);
}

ScenarioConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides) {
  if (path == "default") return apply_overrides(default_scenario(), overrides);
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), overrides, path.string());
}

ScenarioConfig apply_overrides(const ScenarioConfig& config, std::span<const std::string> overrides) {
  if (overrides.empty()) {
    validate(config);
    return config;
  }
  json tree = to_json(config);
  for (const auto& o : overrides) apply_override(tree, o);
  try {
    return from_json(tree);
  } catch (const json::exception& e) {
    throw ConfigError("", std::string("override: ") + e.what());
  }
}

std::string config_to_text(const ScenarioConfig& config) { return to_json(config).dump(2) + "\n"; }

}  // namespace irsopt
