#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cp1/hyp_core.hpp"

namespace cp1::test {

inline std::string data_path(const std::string& name) { return std::string(CP1_TEST_DATA) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Length of the straight Euclidean path p -> q in the hyperbolic metric, by
// composite Simpson rule on |dz| / y.
inline double euclidean_path_length(Complex p, Complex q, int n = 20000) {
  double h = 1.0 / n, sum = 0.0;
  double len = std::abs(q - p);
  for (int i = 0; i <= n; ++i) {
    double t = i * h;
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w / (p + t * (q - p)).imag();
  }
  return len * sum * h / 3.0;
}

// Hyperbolic length of a sampled curve.
inline double sampled_length(const std::vector<Complex>& pts) {
  double s = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) s += euclidean_path_length(pts[i - 1], pts[i], 200);
  return s;
}

inline std::vector<Complex> sample_curve(const Curve& c, int n) {
  std::vector<Complex> out;
  for (int i = 0; i <= n; ++i) out.push_back(curve_point(c, static_cast<double>(i) / n));
  return out;
}

// Proper intersection of Euclidean segments ab and cd.
inline std::optional<Complex> segment_cross(Complex a, Complex b, Complex c, Complex d) {
  auto cr = [](Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); };
  Complex r = b - a, s = d - c;
  double den = cr(r, s);
  if (den == 0.0) return std::nullopt;
  double t = cr(c - a, s) / den, u = cr(c - a, r) / den;
  if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0) return std::nullopt;
  return a + t * r;
}

// Crossing points of two geodesic segments from circle/line algebra alone.
inline std::vector<Complex> exact_geodesic_crossings(Complex p1, Complex q1, Complex p2, Complex q2) {
  struct Carrier {
    bool line;
    double x, c, r;
  };
  auto carrier = [](Complex p, Complex q) {
    if (std::abs(p.real() - q.real()) < 1e-14) return Carrier{true, p.real(), 0, 0};
    double c = (std::norm(q) - std::norm(p)) / (2.0 * (q.real() - p.real()));
    return Carrier{false, 0, c, std::abs(p - c)};
  };
  auto on_seg = [](Complex p, Complex q, Complex z) {
    double lo = std::min(p.real(), q.real()), hi = std::max(p.real(), q.real());
    double ylo = std::min(p.imag(), q.imag()), yhi = std::max(p.imag(), q.imag());
    if (std::abs(p.real() - q.real()) < 1e-14) return z.imag() > ylo && z.imag() < yhi;
    return z.real() > lo && z.real() < hi;
  };
  Carrier a = carrier(p1, q1), b = carrier(p2, q2);
  std::vector<Complex> cand;
  if (a.line && b.line) return {};
  if (a.line || b.line) {
    const Carrier& l = a.line ? a : b;
    const Carrier& c = a.line ? b : a;
    double dx = l.x - c.c;
    if (c.r * c.r - dx * dx > 0) cand.emplace_back(l.x, std::sqrt(c.r * c.r - dx * dx));
  } else if (a.c != b.c) {
    double x = (a.r * a.r - b.r * b.r + b.c * b.c - a.c * a.c) / (2.0 * (b.c - a.c));
    double y2 = a.r * a.r - (x - a.c) * (x - a.c);
    if (y2 > 0) cand.emplace_back(x, std::sqrt(y2));
  }
  std::vector<Complex> out;
  for (Complex z : cand)
    if (on_seg(p1, q1, z) && on_seg(p2, q2, z)) out.push_back(z);
  return out;
}

inline Complex random_point(std::mt19937_64& rng, double xr = 2.0) {
  std::uniform_real_distribution<double> x(-xr, xr), ly(-1.0, 1.0);
  return {x(rng), std::exp(ly(rng))};
}

inline MobiusMap random_isometry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), th(0.0, 6.283185307179586);
  return MobiusMap::rotation_about_i(th(rng)) * MobiusMap::dilation(u(rng)) * MobiusMap::translation(u(rng));
}

}  // namespace cp1::test
