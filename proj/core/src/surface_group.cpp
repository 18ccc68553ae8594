#include "cp1/surface_group.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <mutex>
#include <unordered_map>

#include "cp1/error.hpp"

namespace cp1 {

// ---------------------------------------------------------------- GroupWord

GroupWord::GroupWord(std::vector<int> letters) {
  for (int l : letters) {
    if (l == 0) fail(ErrorKind::BadIndex, "letter 0");
    if (!letters_.empty() && letters_.back() == -l)
      letters_.pop_back();
    else
      letters_.push_back(l);
  }
}

GroupWord GroupWord::parse(std::string_view text, int genus) {
  if (text.empty() || text == "e" || text == "1") return {};
  std::vector<int> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char ch = text[i];
    if (ch == ' ' || ch == '*' || ch == '.') {
      ++i;
      continue;
    }
    int base;
    bool inv;
    switch (ch) {
      case 'a': base = 1; inv = false; break;
      case 'A': base = 1; inv = true; break;
      case 'b': base = 2; inv = false; break;
      case 'B': base = 2; inv = true; break;
      default:
        fail(ErrorKind::ParseError, "bad letter '" + std::string(1, ch) + "' at offset " + std::to_string(i));
    }
    ++i;
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) fail(ErrorKind::ParseError, "missing index at offset " + std::to_string(i));
    int idx = std::stoi(std::string(text.substr(i, j - i)));
    if (idx < 1 || idx > genus)
      fail(ErrorKind::BadIndex, "generator index " + std::to_string(idx) + " outside 1.." + std::to_string(genus));
    int letter = 2 * (idx - 1) + base;
    out.push_back(inv ? -letter : letter);
    i = j;
  }
  return GroupWord(std::move(out));
}

std::string GroupWord::to_string() const {
  if (letters_.empty()) return "e";
  std::string s;
  for (int l : letters_) {
    int a = std::abs(l);
    bool is_a = (a % 2) == 1;
    int idx = (a + 1) / 2;
    char c = is_a ? 'a' : 'b';
    if (l < 0) c = static_cast<char>(std::toupper(c));
    s += c;
    s += std::to_string(idx);
  }
  return s;
}

GroupWord GroupWord::inverse() const {
  std::vector<int> v(letters_.rbegin(), letters_.rend());
  for (int& l : v) l = -l;
  GroupWord w;
  w.letters_ = std::move(v);
  return w;
}

GroupWord GroupWord::operator*(const GroupWord& o) const {
  std::vector<int> v = letters_;
  v.insert(v.end(), o.letters_.begin(), o.letters_.end());
  return GroupWord(std::move(v));
}

GroupWord GroupWord::power(int n) const {
  GroupWord base = n >= 0 ? *this : inverse();
  GroupWord r;
  for (int i = 0; i < std::abs(n); ++i) r = r * base;
  return r;
}

// ---------------------------------------------------------------- FuchsianRep

double relator_residual(int genus, const std::vector<MobiusMap>& gens) {
  MobiusMap p;
  for (int i = 0; i < genus; ++i) {
    const MobiusMap& a = gens[2 * i];
    const MobiusMap& b = gens[2 * i + 1];
    p = p * a * b * a.inverse() * b.inverse();
  }
  return p.distance(MobiusMap());
}

FuchsianRep::FuchsianRep(int genus, std::vector<MobiusMap> generators, double tau_alg)
    : genus_(genus), gens_(std::move(generators)) {
  if (genus < 2) fail(ErrorKind::InvalidArgument, "genus must be >= 2");
  if (static_cast<int>(gens_.size()) != 2 * genus)
    fail(ErrorKind::InvalidArgument, "expected " + std::to_string(2 * genus) + " generators");
  for (const auto& g : gens_) {
    if (classify(g).kind != MobiusKind::Hyperbolic)
      fail(ErrorKind::NotHyperbolic, "generator is not hyperbolic");
    invs_.push_back(g.inverse());
  }
  residual_ = cp1::relator_residual(genus, gens_);
  if (residual_ > tau_alg) fail(ErrorKind::RelatorViolation, "relator residual " + std::to_string(residual_));
}

const MobiusMap& FuchsianRep::letter(int l) const {
  int a = std::abs(l);
  if (l == 0 || a > 2 * genus_) fail(ErrorKind::BadIndex, "letter " + std::to_string(l));
  return l > 0 ? gens_[a - 1] : invs_[a - 1];
}

bool FuchsianRep::operator==(const FuchsianRep& o) const {
  if (genus_ != o.genus_) return false;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const MobiusMap& x = gens_[i];
    const MobiusMap& y = o.gens_[i];
    if (x.a() != y.a() || x.b() != y.b() || x.c() != y.c() || x.d() != y.d()) return false;
  }
  return true;
}

double regular_polygon_inradius(int genus) {
  const double n = 4.0 * genus;
  const double target = std::cos(M_PI / n);  // cos(alpha/2), alpha = 2 pi / n
  const double s = std::sin(M_PI / n);
  double lo = 0.0, hi = 20.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (std::cosh(mid) * s < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

using C2 = std::array<std::complex<double>, 4>;

C2 mul(const C2& x, const C2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

C2 inv(const C2& x) {
  auto det = x[0] * x[3] - x[1] * x[2];
  return {x[3] / det, -x[1] / det, -x[2] / det, x[0] / det};
}

C2 rot(double phi) {
  return {std::polar(1.0, phi / 2), 0.0, 0.0, std::polar(1.0, -phi / 2)};
}

MobiusMap to_halfplane(const C2& disk) {
  const std::complex<double> i(0.0, 1.0);
  const C2 cayley{i, i, -1.0, 1.0};
  C2 x = mul(mul(cayley, disk), inv(cayley));
  auto det = x[0] * x[3] - x[1] * x[2];
  auto k = 1.0 / std::sqrt(det);
  for (auto& e : x) e *= k;
  // x is real up to a global unit factor; pick it from the dominant entry
  std::size_t best = 0;
  for (std::size_t j = 1; j < 4; ++j)
    if (std::abs(x[j]) > std::abs(x[best])) best = j;
  auto phase = x[best] / std::abs(x[best]);
  for (auto& e : x) e /= phase;
  for (const auto& e : x)
    if (std::abs(e.imag()) > 1e-9) fail(ErrorKind::InvalidArgument, "side pairing is not real");
  return MobiusMap::from_entries(x[0].real(), x[1].real(), x[2].real(), x[3].real());
}

}  // namespace

FuchsianRep canonical_rep(int genus) {
  if (genus < 2) fail(ErrorKind::InvalidArgument, "genus must be >= 2");
  const int n = 4 * genus;
  const double r = regular_polygon_inradius(genus);
  const double d = 2.0 * r;
  const C2 tau{std::cosh(d / 2), std::sinh(d / 2), std::sinh(d / 2), std::cosh(d / 2)};
  auto theta = [n](int k) { return 2.0 * M_PI * k / n; };
  auto pair = [&](int k, int m) { return mul(mul(rot(theta(m)), tau), rot(M_PI - theta(k))); };
  std::vector<MobiusMap> gens;
  for (int i = 0; i < genus; ++i) {
    int b = 4 * i;
    gens.push_back(to_halfplane(pair(b + 2, b)));
    gens.push_back(to_halfplane(inv(pair(b + 3, b + 1))));
  }
  return FuchsianRep(genus, std::move(gens));
}

RepPtr canonical_rep_ptr(int genus) {
  static std::mutex mu;
  static std::map<int, RepPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(genus);
  if (it != cache.end()) return it->second;
  auto p = std::make_shared<const FuchsianRep>(canonical_rep(genus));
  cache.emplace(genus, p);
  return p;
}

MobiusMap evaluate(const FuchsianRep& rep, const GroupWord& w) {
  MobiusMap m;
  for (int l : w.letters()) m = m * rep.letter(l);
  return m;
}

double free_ball_count(int genus, int radius) {
  double n = 4.0 * genus;
  return 1.0 + n * (std::pow(n - 1.0, radius) - 1.0) / (n - 2.0);
}

int effective_radius(int genus, int requested, const Config& cfg) {
  int r = std::min(requested, cfg.ball_max);
  while (r > 0 && free_ball_count(genus, r) > static_cast<double>(cfg.ball_cap)) --r;
  return r;
}

namespace {

using Key = std::array<long long, 4>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (long long v : k) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

constexpr double kGrid = 1e-6;

class MatrixIndex {
 public:
  // Returns true if m was new.
  bool insert(const MobiusMap& m, std::size_t id, const std::vector<BallElement>& store) {
    MobiusMap n = m.sign_normalized();
    double e[4] = {n.a(), n.b(), n.c(), n.d()};
    double scale = 1.0;
    for (double x : e) scale = std::max(scale, std::abs(x));
    std::array<std::vector<long long>, 4> cand;
    Key own{};
    for (int j = 0; j < 4; ++j) {
      double v = e[j] / kGrid;
      long long r = std::llround(v);
      own[j] = r;
      cand[j].push_back(r);
      double f = v - static_cast<double>(r);
      if (f > 0.4) cand[j].push_back(r + 1);
      if (f < -0.4) cand[j].push_back(r - 1);
    }
    for (long long k0 : cand[0])
      for (long long k1 : cand[1])
        for (long long k2 : cand[2])
          for (long long k3 : cand[3]) {
            auto it = map_.find(Key{k0, k1, k2, k3});
            if (it == map_.end()) continue;
            for (std::size_t other : it->second)
              if (store[other].map.distance(m) <= kTauAlg * scale) return false;
          }
    map_[own].push_back(id);
    return true;
  }

 private:
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> map_;
};

}  // namespace

std::vector<BallElement> enumerate_ball(const FuchsianRep& rep, int radius, const Config& cfg) {
  if (radius < 0) fail(ErrorKind::InvalidArgument, "negative radius");
  if (radius > cfg.ball_max)
    fail(ErrorKind::BallTooLarge, "radius " + std::to_string(radius) + " exceeds ball_max " +
                                      std::to_string(cfg.ball_max));
  std::vector<BallElement> out;
  MatrixIndex index;
  out.push_back({GroupWord(), MobiusMap()});
  index.insert(out[0].map, 0, out);
  std::size_t level_begin = 0, level_end = 1;
  const int n = rep.generator_count();
  for (int len = 1; len <= radius; ++len) {
    for (std::size_t i = level_begin; i < level_end; ++i) {
      const std::vector<int> letters = out[i].word.letters();
      const MobiusMap base = out[i].map;
      int last = letters.empty() ? 0 : letters.back();
      for (int g = 1; g <= n; ++g) {
        for (int l : {g, -g}) {
          if (l == -last) continue;
          std::vector<int> w = letters;
          w.push_back(l);
          MobiusMap m = base * rep.letter(l);
          std::size_t id = out.size();
          out.push_back({GroupWord(std::move(w)), m});
          if (!index.insert(m, id, out)) {
            out.pop_back();
            continue;
          }
          if (out.size() > cfg.ball_cap)
            fail(ErrorKind::BallTooLarge, "ball exceeds cap " + std::to_string(cfg.ball_cap));
        }
      }
    }
    level_begin = level_end;
    level_end = out.size();
  }
  return out;
}

std::shared_ptr<const std::vector<BallElement>> cached_ball(const FuchsianRep& rep, int radius,
                                                            const Config& cfg) {
  using CacheKey = std::pair<std::vector<double>, int>;
  static std::mutex mu;
  static std::map<CacheKey, std::shared_ptr<const std::vector<BallElement>>> cache;
  std::vector<double> fp;
  for (const auto& g : rep.generators()) fp.insert(fp.end(), {g.a(), g.b(), g.c(), g.d()});
  CacheKey key{fp, radius};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto ball = std::make_shared<const std::vector<BallElement>>(enumerate_ball(rep, radius, cfg));
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, ball);
  return ball;
}

namespace {

bool discreteness_dfs(const FuchsianRep& rep, const MobiusMap& m, int last, int depth, int max_len,
                      double tol) {
  if (depth > 0 && !m.is_identity(1e-9) && std::abs(m.trace()) < 2.0 - tol) return false;
  if (depth == max_len) return true;
  for (int g = 1; g <= rep.generator_count(); ++g)
    for (int l : {g, -g}) {
      if (l == -last) continue;
      if (!discreteness_dfs(rep, m * rep.letter(l), l, depth + 1, max_len, tol)) return false;
    }
  return true;
}

}  // namespace

bool passes_discreteness_heuristic(const FuchsianRep& rep, int length, double tol) {
  return discreteness_dfs(rep, MobiusMap(), 0, 0, length, tol);
}

std::vector<int> homology_mod2(const GroupWord& w, int genus) {
  std::vector<int> h(2 * genus, 0);
  for (int l : w.letters()) {
    int a = std::abs(l);
    if (a > 2 * genus) fail(ErrorKind::BadIndex, "letter " + std::to_string(l));
    h[a - 1] ^= 1;
  }
  return h;
}

}  // namespace cp1
