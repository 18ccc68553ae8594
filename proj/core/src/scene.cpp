#include "cp1/scene.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cp1/error.hpp"

namespace cp1 {

namespace {

struct Token {
  std::string text;
  int column;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

[[noreturn]] void parse_fail(int line, int col, const std::string& msg) {
  fail(ErrorKind::ParseError, std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

double to_double(const Token& t, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t.text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.text.size() || !std::isfinite(v)) parse_fail(line, t.column, "expected a number, got '" + t.text + "'");
  return v;
}

int to_int(const Token& t, int line) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(t.text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.text.size()) parse_fail(line, t.column, "expected an integer, got '" + t.text + "'");
  return static_cast<int>(v);
}

void expect_count(const std::vector<Token>& tok, std::size_t n, int line, const std::string& form) {
  if (tok.size() != n)
    parse_fail(line, tok.size() > n ? tok[n].column : static_cast<int>(tok.back().column + tok.back().text.size()),
               "expected '" + form + "'");
}

}  // namespace

Scene parse_scene(const std::string& text) {
  Scene s;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool header = false, have_genus = false;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto tok = tokenize(raw);
    if (tok.empty()) continue;
    const std::string& key = tok[0].text;
    if (!header) {
      if (tok.size() != 2 || key != "cp1-scene" || tok[1].text != "v1")
        parse_fail(line, tok[0].column, "first line must be 'cp1-scene v1'");
      header = true;
      continue;
    }
    if (key == "genus") {
      expect_count(tok, 2, line, "genus N");
      if (have_genus) parse_fail(line, tok[0].column, "genus given twice");
      s.genus = to_int(tok[1], line);
      if (s.genus < 2) parse_fail(line, tok[1].column, "genus must be at least 2");
      have_genus = true;
    } else if (key == "curve") {
      if (tok.size() < 3) parse_fail(line, tok[0].column, "expected 'curve WORD WEIGHT'");
      SceneCurve c;
      for (std::size_t i = 1; i + 1 < tok.size(); ++i) c.word += (i > 1 ? " " : "") + tok[i].text;
      c.weight = to_int(tok.back(), line);
      if (c.weight < 1) parse_fail(line, tok.back().column, "weight must be positive");
      s.curves.push_back(c);
    } else if (key == "point") {
      expect_count(tok, 3, line, "point X Y");
      double x = to_double(tok[1], line), y = to_double(tok[2], line);
      if (!(y > 0.0)) parse_fail(line, tok[2].column, "point must lie in the upper half-plane");
      s.points.emplace_back(x, y);
    } else if (key == "override") {
      expect_count(tok, 4, line, "override INDEX SHIFT DRIFT");
      int idx = to_int(tok[1], line);
      if (idx < 0) parse_fail(line, tok[1].column, "crossing index must be non-negative");
      double shift = to_double(tok[2], line);
      if (!(shift > 0.0)) parse_fail(line, tok[2].column, "shift must be positive");
      int drift = to_int(tok[3], line);
      if (drift != 1 && drift != -1) parse_fail(line, tok[3].column, "drift must be 1 or -1");
      s.overrides[idx] = DetourOverride{shift, drift};
    } else if (key == "config") {
      expect_count(tok, 3, line, "config KEY VALUE");
      Config probe;
      try {
        apply_config_setting(probe, tok[1].text, tok[2].text);
      } catch (const Error& e) {
        parse_fail(line, tok[1].column, e.detail());
      }
      s.settings.emplace_back(tok[1].text, tok[2].text);
    } else {
      parse_fail(line, tok[0].column, "unknown key '" + key + "'");
    }
  }
  if (!header) parse_fail(line + 1, 1, "missing 'cp1-scene v1' header");
  if (!have_genus) parse_fail(line + 1, 1, "missing 'genus' line");
  if (s.points.size() == 1) parse_fail(line + 1, 1, "an arc needs at least two points");
  return s;
}

Scene read_scene_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::ParseError, path + ": cannot open");
  std::ostringstream os;
  os << f.rdbuf();
  try {
    return parse_scene(os.str());
  } catch (const Error& e) {
    fail(ErrorKind::ParseError, path + ":" + e.detail());
  }
}

std::string format_scene(const Scene& s) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "cp1-scene v1\n";
  os << "genus " << s.genus << "\n";
  for (const auto& c : s.curves) os << "curve " << c.word << " " << c.weight << "\n";
  for (auto p : s.points) os << "point " << p.real() << " " << p.imag() << "\n";
  for (const auto& [i, o] : s.overrides)
    os << "override " << i << " " << o.shift.value_or(Config{}.detour_shift) << " " << o.drift.value_or(1) << "\n";
  for (const auto& [k, v] : s.settings) os << "config " << k << " " << v << "\n";
  return os.str();
}

LoadedScene load_scene(const Scene& s, const Config& base) {
  LoadedScene out;
  out.scene = s;
  out.config = base;
  for (const auto& [k, v] : s.settings) apply_config_setting(out.config, k, v);
  WeightedMulticurve mc;
  for (const auto& c : s.curves) mc.components.push_back({GroupWord::parse(c.word, s.genus), c.weight});
  out.structure = build_structure(canonical_rep_ptr(s.genus), mc, out.config);
  if (s.points.size() >= 2) out.arc = develop_polyline(out.structure, s.points, s.overrides, out.config);
  return out;
}

}  // namespace cp1
