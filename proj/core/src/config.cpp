#include "cp1/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cp1/error.hpp"

namespace cp1 {

namespace {

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(ErrorKind::ParseError, "config " + key + ": expected a number, got '" + v + "'");
  }
}

long parse_int(const std::string& key, const std::string& v) {
  long x = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    fail(ErrorKind::ParseError, "config " + key + ": expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  fail(ErrorKind::ParseError, "config " + key + ": expected on/off, got '" + v + "'");
}

}  // namespace

void apply_config_setting(Config& cfg, const std::string& key, const std::string& value) {
  if (key == "tau_alg") {
    cfg.tau_alg = parse_double(key, value);
  } else if (key == "tau_sep") {
    cfg.tau_sep = parse_double(key, value);
  } else if (key == "epsilon_cap") {
    cfg.epsilon_cap = parse_double(key, value);
  } else if (key == "ball_max") {
    cfg.ball_max = static_cast<int>(parse_int(key, value));
  } else if (key == "ball_cap") {
    cfg.ball_cap = static_cast<std::size_t>(parse_int(key, value));
  } else if (key == "disjointness_radius") {
    cfg.disjointness_radius = static_cast<int>(parse_int(key, value));
  } else if (key == "lift_radius") {
    cfg.lift_radius = static_cast<int>(parse_int(key, value));
  } else if (key == "simplicity_radius") {
    cfg.simplicity_radius = static_cast<int>(parse_int(key, value));
  } else if (key == "discreteness_length") {
    cfg.discreteness_length = static_cast<int>(parse_int(key, value));
  } else if (key == "detour_shift") {
    cfg.detour_shift = parse_double(key, value);
  } else if (key == "max_perturbations") {
    cfg.max_perturbations = static_cast<int>(parse_int(key, value));
  } else if (key == "verify") {
    cfg.verify = parse_bool(key, value);
  } else {
    fail(ErrorKind::ParseError, "unknown config key '" + key + "'");
  }
  if (cfg.epsilon_cap <= 0 || cfg.tau_alg <= 0 || cfg.tau_sep <= 0 || cfg.detour_shift <= 0)
    fail(ErrorKind::ParseError, "config " + key + ": value must be positive");
  if (cfg.ball_max < 0 || cfg.disjointness_radius < 0 || cfg.lift_radius < 0 ||
      cfg.simplicity_radius < 0 || cfg.discreteness_length < 0)
    fail(ErrorKind::ParseError, "config " + key + ": radius must be non-negative");
}

void load_config_file(Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string key, value, extra;
    if (!(ss >> key)) continue;
    if (!(ss >> value) || (ss >> extra))
      fail(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ":1: expected 'key value'");
    try {
      apply_config_setting(cfg, key, value);
    } catch (const Error& e) {
      fail(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ":1: " + e.detail());
    }
  }
}

Config config_from_environment() {
  Config cfg;
  if (const char* path = std::getenv("CP1_CONFIG"); path && *path) load_config_file(cfg, path);
  return cfg;
}

}  // namespace cp1
