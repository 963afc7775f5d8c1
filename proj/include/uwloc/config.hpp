#ifndef UWLOC_CONFIG_HPP
#define UWLOC_CONFIG_HPP

#include <string>

#include "uwloc/channel.hpp"
#include "uwloc/geometry.hpp"

namespace uwloc {

enum class LocalizationMode { kPeriodic, kOnDemand };

// Network-level parameters: geometry, node counts, target probabilities.
struct NetworkConfig {
  int num_anchors = 5;        // N
  int num_sensors = 100;      // M
  int required_anchors = 3;   // K, distinct packets needed for a fix
  double sound_speed = 1500.0;
  Region region{4500.0, 4500.0};
  double max_anchor_distance = 0.0;         // D_aa; 0 -> region diagonal
  double max_sensor_anchor_distance = 0.0;  // D_sa; 0 -> region diagonal
  double loss_prob = 0.1;                   // p_l, fading/shadowing loss
  double target_loc_prob = 0.99;            // P_ss
  double target_schedule_prob = 0.90;       // P_tt
  LocalizationMode mode = LocalizationMode::kPeriodic;

  double anchor_diameter() const;         // resolved D_aa
  double sensor_anchor_diameter() const;  // resolved D_sa
  void validate() const;
};

struct Config {
  NetworkConfig net;
  PhyConfig phy;
};

// JSON round-trip. Keys follow the conventional parameter symbols
// (N, K, D_x, p_l, gamma_0_dB, ...) so configs read like the parameter
// table they come from. Unknown keys are rejected with their path.
Config config_from_json_text(const std::string& text);
Config load_config(const std::string& path);
std::string config_to_json_text(const Config& cfg);

// Applies one "key=value" override (same keys as the JSON document).
void apply_override(Config& cfg, const std::string& key_value);

Config default_config();

}  // namespace uwloc

#endif
