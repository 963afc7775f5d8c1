#include "uwloc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "uwloc/errors.hpp"

namespace uwloc {

namespace {

using nlohmann::json;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double v) { return 10.0 * std::log10(v); }

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

const char* const kKnownKeys[] = {
    "N",    "M",    "K",          "c",          "D_x",  "D_y",  "D_aa", "D_sa",
    "T_g",  "b_s",  "b_p",        "B",          "p_l",  "N_0B_dB", "k_E", "P_0",
    "P_L",  "d_0",  "alpha_0",    "n_0",        "gamma_0_dB", "P_ss", "P_tt", "mode"};

void check_keys(const json& j) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kKnownKeys) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("config: unknown field '" + it.key() + "'");
  }
}

}  // namespace

double NetworkConfig::anchor_diameter() const {
  return max_anchor_distance > 0.0 ? max_anchor_distance : region.diagonal();
}

double NetworkConfig::sensor_anchor_diameter() const {
  return max_sensor_anchor_distance > 0.0 ? max_sensor_anchor_distance : region.diagonal();
}

void NetworkConfig::validate() const {
  region.validate();
  if (num_anchors < 1) throw ConfigError("NetworkConfig: N must be at least 1");
  if (num_sensors < 1) throw ConfigError("NetworkConfig: M must be at least 1");
  if (required_anchors < 1 || required_anchors > num_anchors)
    throw ConfigError("NetworkConfig: K must lie in [1, N]");
  if (!(sound_speed > 0.0)) throw ConfigError("NetworkConfig: c must be positive");
  if (!(loss_prob >= 0.0 && loss_prob <= 1.0))
    throw ConfigError("NetworkConfig: p_l must lie in [0, 1]");
  if (!(target_loc_prob > 0.0 && target_loc_prob < 1.0))
    throw ConfigError("NetworkConfig: P_ss must lie in (0, 1)");
  if (!(target_schedule_prob > 0.0 && target_schedule_prob < 1.0))
    throw ConfigError("NetworkConfig: P_tt must lie in (0, 1)");
}

Config config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top-level value must be an object");
  check_keys(j);

  Config cfg = default_config();
  read_field(j, "N", cfg.net.num_anchors);
  read_field(j, "M", cfg.net.num_sensors);
  read_field(j, "K", cfg.net.required_anchors);
  read_field(j, "c", cfg.net.sound_speed);
  read_field(j, "D_x", cfg.net.region.width);
  read_field(j, "D_y", cfg.net.region.height);
  read_field(j, "D_aa", cfg.net.max_anchor_distance);
  read_field(j, "D_sa", cfg.net.max_sensor_anchor_distance);
  read_field(j, "p_l", cfg.net.loss_prob);
  read_field(j, "P_ss", cfg.net.target_loc_prob);
  read_field(j, "P_tt", cfg.net.target_schedule_prob);

  std::string mode = "periodic";
  read_field(j, "mode", mode);
  if (mode == "periodic") {
    cfg.net.mode = LocalizationMode::kPeriodic;
  } else if (mode == "on_demand") {
    cfg.net.mode = LocalizationMode::kOnDemand;
  } else {
    throw ConfigError("config field 'mode': expected \"periodic\" or \"on_demand\"");
  }

  read_field(j, "B", cfg.phy.bandwidth_hz);
  read_field(j, "b_s", cfg.phy.bits_per_symbol);
  read_field(j, "b_p", cfg.phy.bits_per_packet);
  read_field(j, "T_g", cfg.phy.guard_time_s);
  read_field(j, "P_0", cfg.phy.tx_power_w);
  read_field(j, "P_L", cfg.phy.listen_power_w);
  read_field(j, "alpha_0", cfg.phy.ref_gain);
  read_field(j, "d_0", cfg.phy.ref_distance_m);
  read_field(j, "n_0", cfg.phy.path_loss_exp);
  read_field(j, "k_E", cfg.phy.tof_noise_coeff);

  double gamma_db = linear_to_db(cfg.phy.snr_threshold);
  read_field(j, "gamma_0_dB", gamma_db);
  cfg.phy.snr_threshold = db_to_linear(gamma_db);

  double noise_db = linear_to_db(cfg.phy.noise_power_w);
  read_field(j, "N_0B_dB", noise_db);
  cfg.phy.noise_power_w = db_to_linear(noise_db);

  cfg.net.validate();
  cfg.phy.validate();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

std::string config_to_json_text(const Config& cfg) {
  json j;
  j["N"] = cfg.net.num_anchors;
  j["M"] = cfg.net.num_sensors;
  j["K"] = cfg.net.required_anchors;
  j["c"] = cfg.net.sound_speed;
  j["D_x"] = cfg.net.region.width;
  j["D_y"] = cfg.net.region.height;
  j["D_aa"] = cfg.net.anchor_diameter();
  j["D_sa"] = cfg.net.sensor_anchor_diameter();
  j["p_l"] = cfg.net.loss_prob;
  j["P_ss"] = cfg.net.target_loc_prob;
  j["P_tt"] = cfg.net.target_schedule_prob;
  j["mode"] = cfg.net.mode == LocalizationMode::kPeriodic ? "periodic" : "on_demand";
  j["B"] = cfg.phy.bandwidth_hz;
  j["b_s"] = cfg.phy.bits_per_symbol;
  j["b_p"] = cfg.phy.bits_per_packet;
  j["T_g"] = cfg.phy.guard_time_s;
  j["P_0"] = cfg.phy.tx_power_w;
  j["P_L"] = cfg.phy.listen_power_w;
  j["alpha_0"] = cfg.phy.ref_gain;
  j["d_0"] = cfg.phy.ref_distance_m;
  j["n_0"] = cfg.phy.path_loss_exp;
  j["k_E"] = cfg.phy.tof_noise_coeff;
  j["gamma_0_dB"] = linear_to_db(cfg.phy.snr_threshold);
  j["N_0B_dB"] = linear_to_db(cfg.phy.noise_power_w);
  return j.dump(2);
}

void apply_override(Config& cfg, const std::string& key_value) {
  const std::size_t eq = key_value.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--set expects key=value, got '" + key_value + "'");
  const std::string key = key_value.substr(0, eq);
  const std::string value = key_value.substr(eq + 1);

  json j;
  try {
    j = json::parse(config_to_json_text(cfg));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.contains(key)) throw ConfigError("config: unknown field '" + key + "'");

  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;  // bare strings, e.g. mode=periodic
  }
  j[key] = parsed;
  cfg = config_from_json_text(j.dump());
}

Config default_config() { return Config{}; }

}  // namespace uwloc
