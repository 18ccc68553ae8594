#pragma once

#include <cstddef>
#include <string>

namespace cp1 {

inline constexpr double kTauAlg = 1e-9;
inline constexpr double kTauSep = 1e-6;

struct Config {
  double tau_alg = kTauAlg;
  double tau_sep = kTauSep;
  double epsilon_cap = 0.05;
  int ball_max = 8;
  std::size_t ball_cap = 400000;
  int disjointness_radius = 6;
  int lift_radius = 4;
  int simplicity_radius = 3;
  int discreteness_length = 6;
  double detour_shift = 0.1;
  int max_perturbations = 64;
  bool verify = true;
};

// Applies one "key value" setting; throws ParseError on unknown keys or bad values.
void apply_config_setting(Config& cfg, const std::string& key, const std::string& value);

// Reads "key value" lines (blank lines and '#' comments ignored).
void load_config_file(Config& cfg, const std::string& path);

// Defaults overridden by the file named in CP1_CONFIG, if set.
Config config_from_environment();

}  // namespace cp1
