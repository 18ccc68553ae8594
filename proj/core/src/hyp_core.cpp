#include "cp1/hyp_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cp1/error.hpp"

namespace cp1 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

}  // namespace

// ---------------------------------------------------------------- HPoint

HPoint HPoint::interior(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y) || !(y > 0.0))
    fail(ErrorKind::InvalidArgument, "interior point needs finite x and y > 0");
  HPoint p;
  p.kind_ = Kind::Interior;
  p.x_ = x;
  p.y_ = y;
  return p;
}

HPoint HPoint::real(double x) {
  if (!std::isfinite(x)) fail(ErrorKind::InvalidArgument, "real boundary point must be finite");
  HPoint p;
  p.kind_ = Kind::Real;
  p.x_ = x;
  p.y_ = 0.0;
  return p;
}

HPoint HPoint::infinity() {
  HPoint p;
  p.kind_ = Kind::Infinity;
  p.x_ = 0.0;
  p.y_ = 0.0;
  return p;
}

double HPoint::x() const {
  if (kind_ == Kind::Infinity) fail(ErrorKind::BoundaryPoint, "x of the point at infinity");
  return x_;
}

double HPoint::y() const {
  if (kind_ != Kind::Interior) fail(ErrorKind::BoundaryPoint, "y of a boundary point");
  return y_;
}

Complex HPoint::z() const {
  if (kind_ != Kind::Interior) fail(ErrorKind::BoundaryPoint, "complex value of a boundary point");
  return {x_, y_};
}

bool HPoint::approx_equal(const HPoint& o, double tol) const {
  if (kind_ != o.kind_) return false;
  if (kind_ == Kind::Infinity) return true;
  double scale = 1.0 + std::max(std::abs(x_), std::abs(o.x_));
  return std::abs(x_ - o.x_) <= tol * scale && std::abs(y_ - o.y_) <= tol * scale;
}

// ---------------------------------------------------------------- MobiusMap

MobiusMap MobiusMap::from_entries(double a, double b, double c, double d) {
  double det = a * d - b * c;
  if (!std::isfinite(det) || std::abs(det) < 1e-12)
    fail(ErrorKind::NonInvertible, "|det| = " + std::to_string(std::abs(det)));
  if (det < 0) fail(ErrorKind::InvalidArgument, "orientation-reversing matrix");
  double k = 1.0 / std::sqrt(det);
  return MobiusMap(a * k, b * k, c * k, d * k);
}

MobiusMap MobiusMap::dilation(double t) {
  return MobiusMap(std::exp(t / 2), 0.0, 0.0, std::exp(-t / 2));
}

MobiusMap MobiusMap::rotation_about_i(double theta) {
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return MobiusMap(c, s, -s, c);
}

MobiusMap MobiusMap::translation(double x) { return MobiusMap(1.0, x, 0.0, 1.0); }

Complex MobiusMap::apply(Complex z) const {
  Complex den = c_ * z + d_;
  if (den == Complex(0.0, 0.0)) return {kInf, kInf};
  return (a_ * z + b_) / den;
}

HPoint MobiusMap::apply(const HPoint& p) const {
  switch (p.kind()) {
    case HPoint::Kind::Infinity:
      if (c_ == 0.0) return HPoint::infinity();
      return HPoint::real(a_ / c_);
    case HPoint::Kind::Real: {
      double x = p.x();
      double den = c_ * x + d_;
      if (std::abs(den) <= 1e-15 * (std::abs(c_ * x) + std::abs(d_))) return HPoint::infinity();
      return HPoint::real((a_ * x + b_) / den);
    }
    case HPoint::Kind::Interior: {
      Complex w = apply(p.z());
      // PSL2R preserves the upper half-plane; guard against underflow only.
      return HPoint::interior(w.real(), std::max(w.imag(), std::numeric_limits<double>::min()));
    }
  }
  return p;
}

double MobiusMap::derivative_abs(Complex z) const {
  double m = std::abs(c_ * z + d_);
  return 1.0 / (m * m);
}

MobiusMap MobiusMap::inverse() const { return MobiusMap(d_, -b_, -c_, a_); }

MobiusMap MobiusMap::operator*(const MobiusMap& o) const {
  double a = a_ * o.a_ + b_ * o.c_;
  double b = a_ * o.b_ + b_ * o.d_;
  double c = c_ * o.a_ + d_ * o.c_;
  double d = c_ * o.b_ + d_ * o.d_;
  double det = a * d - b * c;
  double roundoff = 1e-14 * (std::abs(a * d) + std::abs(b * c));
  if (det > 0 && std::abs(det - 1.0) > std::max(1e-13, roundoff)) {
    double k = 1.0 / std::sqrt(det);
    return MobiusMap(a * k, b * k, c * k, d * k);
  }
  return MobiusMap(a, b, c, d);
}

MobiusMap MobiusMap::sign_normalized() const {
  const double e[4] = {a_, b_, c_, d_};
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(e[i]) > std::abs(e[best]) * (1.0 + 1e-12)) best = i;
  if (e[best] < 0) return MobiusMap(-a_, -b_, -c_, -d_);
  return *this;
}

double MobiusMap::distance(const MobiusMap& o) const {
  auto diff = [&](double s) {
    return std::max({std::abs(a_ - s * o.a_), std::abs(b_ - s * o.b_), std::abs(c_ - s * o.c_),
                     std::abs(d_ - s * o.d_)});
  };
  return std::min(diff(1.0), diff(-1.0));
}

Classification classify(const MobiusMap& m, double tol) {
  double size = std::max({1.0, std::abs(m.a()), std::abs(m.b()), std::abs(m.c()), std::abs(m.d())});
  if (std::abs(m.det() - 1.0) > 1e-9 * size * size) fail(ErrorKind::NonInvertible, "map is not normalized");
  if (m.is_identity(tol)) return {MobiusKind::Identity, 0.0};
  double tr = std::abs(m.trace());
  if (tr > 2.0 + tol) return {MobiusKind::Hyperbolic, 2.0 * std::acosh(tr / 2.0)};
  if (tr < 2.0 - tol) return {MobiusKind::Elliptic, 0.0};
  return {MobiusKind::Parabolic, 0.0};
}

Axis axis_of(const MobiusMap& m, double tol) {
  if (classify(m, tol).kind != MobiusKind::Hyperbolic)
    fail(ErrorKind::NotHyperbolic, "axis_of requires a hyperbolic element");
  double a = m.a(), b = m.b(), c = m.c(), d = m.d();
  if (c == 0.0) {
    HPoint fin = HPoint::real(b / (d - a));
    if (std::abs(a) > std::abs(d)) return {fin, HPoint::infinity()};
    return {HPoint::infinity(), fin};
  }
  double tr = a + d;
  double disc = std::sqrt(std::max(0.0, tr * tr - 4.0));
  // roots of c z^2 + (d - a) z - b = 0, numerically stable form
  double bb = d - a;
  double q = -0.5 * (bb + (bb >= 0 ? disc : -disc));
  double z1 = q / c;
  double z2 = (q != 0.0) ? -b / q : ((a - d) - disc) / (2 * c);
  auto attracting = [&](double z) { return std::abs(c * z + d) > 1.0; };
  if (attracting(z1)) return {HPoint::real(z2), HPoint::real(z1)};
  return {HPoint::real(z1), HPoint::real(z2)};
}

// ---------------------------------------------------------------- AxisFrame

AxisFrame::AxisFrame(const HPoint& rep, const HPoint& att) {
  if (rep.is_interior() || att.is_interior())
    fail(ErrorKind::InvalidArgument, "axis endpoints must be ideal points");
  if (rep.is_infinity() && att.is_infinity())
    fail(ErrorKind::InvalidArgument, "degenerate axis");
  MobiusMap t;
  if (att.is_infinity()) {
    t = MobiusMap::from_entries(1.0, -rep.x(), 0.0, 1.0);
  } else if (rep.is_infinity()) {
    t = MobiusMap::from_entries(0.0, -1.0, 1.0, -att.x());
  } else {
    double p = rep.x(), q = att.x();
    if (std::abs(p - q) <= 1e-14 * (1.0 + std::abs(p) + std::abs(q)))
      fail(ErrorKind::InvalidArgument, "degenerate axis");
    if (p < q)
      t = MobiusMap::from_entries(-1.0, p, 1.0, -q);
    else
      t = MobiusMap::from_entries(1.0, -p, 1.0, -q);
  }
  t_ = t;
  tinv_ = t.inverse();
}

AxisFrame AxisFrame::from_standardizer(const MobiusMap& t) {
  AxisFrame f;
  f.t_ = t;
  f.tinv_ = t.inverse();
  return f;
}

HPoint AxisFrame::repelling() const { return tinv_.apply(HPoint::real(0.0)); }
HPoint AxisFrame::attracting() const { return tinv_.apply(HPoint::infinity()); }
GeodesicSeg AxisFrame::geodesic() const { return GeodesicSeg(repelling(), attracting()); }

Complex AxisFrame::from_fermi(double s, double u) const {
  double r = std::exp(s);
  Complex w(-r * std::tanh(u), r / std::cosh(u));
  return tinv_.apply(w);
}

std::pair<double, double> AxisFrame::to_fermi(Complex z) const {
  Complex w = t_.apply(z);
  return {std::log(std::abs(w)), std::asinh(-w.real() / w.imag())};
}

AxisFrame AxisFrame::recentered(Complex z) const {
  double s0 = param(z);
  return from_standardizer(MobiusMap::dilation(-s0) * t_);
}

AxisFrame AxisFrame::transformed(const MobiusMap& m) const {
  return from_standardizer(t_ * m.inverse());
}

AxisFrame AxisFrame::reversed() const {
  return from_standardizer(MobiusMap::from_entries(0.0, -1.0, 1.0, 0.0) * t_);
}

// ---------------------------------------------------------------- GeodesicSeg

GeodesicSeg::GeodesicSeg(const HPoint& p, const HPoint& q) : p_(p), q_(q) {
  if (p.is_infinity() && q.is_infinity()) fail(ErrorKind::InvalidArgument, "degenerate geodesic");
  auto height = [](const HPoint& h) {
    if (h.is_infinity()) return kInf;
    return h.is_interior() ? h.y() : 0.0;
  };
  if (p.is_infinity() || q.is_infinity()) {
    vertical_ = true;
    line_x_ = p.is_infinity() ? q.x() : p.x();
  } else {
    double xp = p.x(), xq = q.x(), yp = height(p), yq = height(q);
    double scale = 1.0 + std::abs(xp) + std::abs(xq);
    if (std::abs(xp - xq) <= 1e-13 * scale) {
      if (std::abs(yp - yq) <= 1e-13 * scale) fail(ErrorKind::InvalidArgument, "degenerate geodesic");
      vertical_ = true;
      line_x_ = 0.5 * (xp + xq);
    } else {
      vertical_ = false;
      center_ = (xp * xp + yp * yp - xq * xq - yq * yq) / (2.0 * (xp - xq));
      radius_ = std::hypot(xp - center_, yp);
    }
  }
  if (vertical_) {
    if (height(q) > height(p))
      frame_ = AxisFrame(HPoint::real(line_x_), HPoint::infinity());
    else
      frame_ = AxisFrame(HPoint::infinity(), HPoint::real(line_x_));
  } else {
    auto angle = [&](const HPoint& h) { return std::atan2(height(h), h.x() - center_); };
    if (angle(q) < angle(p))
      frame_ = AxisFrame(HPoint::real(center_ - radius_), HPoint::real(center_ + radius_));
    else
      frame_ = AxisFrame(HPoint::real(center_ + radius_), HPoint::real(center_ - radius_));
  }
  s_p_ = p.is_interior() ? frame_.param(p.z()) : -kInf;
  s_q_ = q.is_interior() ? frame_.param(q.z()) : kInf;
}

Carrier GeodesicSeg::carrier() const {
  Carrier c;
  if (vertical_) {
    c.is_line = true;
    c.origin = {line_x_, 0.0};
    c.direction = {0.0, 1.0};
  } else {
    c.center = {center_, 0.0};
    c.radius = radius_;
  }
  return c;
}

double GeodesicSeg::length() const { return s_q_ - s_p_; }

Complex GeodesicSeg::point_at(double t) const {
  if (!p_.is_interior() || !q_.is_interior())
    fail(ErrorKind::BoundaryPoint, "point_at on a geodesic with ideal endpoints");
  if (t <= 0.0) return p_.z();
  if (t >= 1.0) return q_.z();
  return frame_.from_fermi(s_p_ + t * (s_q_ - s_p_), 0.0);
}

// ---------------------------------------------------------------- HypercycleSeg

HypercycleSeg::HypercycleSeg(const AxisFrame& frame, double distance, double s_from, double s_to)
    : frame_(frame), d_(distance), s0_(s_from), s1_(s_to) {
  if (!std::isfinite(distance) || !std::isfinite(s_from) || !std::isfinite(s_to))
    fail(ErrorKind::InvalidArgument, "hypercycle parameters must be finite");
}

double HypercycleSeg::length() const { return std::abs(s1_ - s0_) * std::cosh(d_); }

Carrier HypercycleSeg::carrier() const {
  HPoint rep = frame_.repelling(), att = frame_.attracting();
  Complex z0 = frame_.from_fermi(0.5 * (s0_ + s1_), d_);
  Carrier c;
  if (rep.is_infinity() || att.is_infinity()) {
    double x = rep.is_infinity() ? att.x() : rep.x();
    c.is_line = true;
    c.origin = {x, 0.0};
    c.direction = (z0 - c.origin) / std::abs(z0 - c.origin);
    return c;
  }
  double a = rep.x(), b = att.x();
  double xc = 0.5 * (a + b);
  double h = 0.5 * std::abs(b - a);
  double k = ((z0.real() - xc) * (z0.real() - xc) + z0.imag() * z0.imag() - h * h) / (2.0 * z0.imag());
  c.center = {xc, k};
  c.radius = std::hypot(h, k);
  return c;
}

// ---------------------------------------------------------------- Curve helpers

Complex curve_start(const Curve& c) {
  return std::visit(
      [](const auto& s) -> Complex {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GeodesicSeg>)
          return s.start().z();
        else
          return s.start();
      },
      c);
}

Complex curve_end(const Curve& c) {
  return std::visit(
      [](const auto& s) -> Complex {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GeodesicSeg>)
          return s.end().z();
        else
          return s.end();
      },
      c);
}

Complex curve_point(const Curve& c, double t) {
  return std::visit([t](const auto& s) { return s.point_at(t); }, c);
}

Curve curve_transformed(const Curve& c, const MobiusMap& m) {
  return std::visit([&m](const auto& s) -> Curve { return s.transformed(m); }, c);
}

Curve curve_reversed(const Curve& c) {
  return std::visit([](const auto& s) -> Curve { return s.reversed(); }, c);
}

namespace {

// Arc of a generalized circle with a parameter window along a frame.
struct CurveView {
  Carrier carrier;
  AxisFrame frame;
  double lo = 0.0, hi = 0.0;
  std::vector<Complex> finite_ends;
  HPoint ideal_lo, ideal_hi;
  bool lo_ideal = false, hi_ideal = false;
};

CurveView make_view(const Curve& c) {
  CurveView v;
  if (const auto* g = std::get_if<GeodesicSeg>(&c)) {
    v.carrier = g->carrier();
    v.frame = g->frame();
    v.lo = g->s_start();
    v.hi = g->s_end();
    if (g->start().is_interior()) v.finite_ends.push_back(g->start().z());
    if (g->end().is_interior()) v.finite_ends.push_back(g->end().z());
    v.lo_ideal = !g->start().is_interior();
    v.hi_ideal = !g->end().is_interior();
    v.ideal_lo = g->frame().repelling();
    v.ideal_hi = g->frame().attracting();
  } else {
    const auto& h = std::get<HypercycleSeg>(c);
    v.carrier = h.carrier();
    v.frame = h.frame();
    v.lo = std::min(h.s_from(), h.s_to());
    v.hi = std::max(h.s_from(), h.s_to());
    v.finite_ends = {h.start(), h.end()};
  }
  return v;
}

bool on_arc(const CurveView& v, Complex z, double tol_s) {
  if (!(z.imag() > 0.0) || !std::isfinite(z.real())) return false;
  double s = v.frame.param(z);
  return s >= v.lo - tol_s && s <= v.hi + tol_s;
}

Complex project(const Carrier& c, Complex z) {
  if (c.is_line) {
    Complex d = c.direction / std::abs(c.direction);
    return c.origin + d * ((z - c.origin) * std::conj(d)).real();
  }
  Complex r = z - c.center;
  double m = std::abs(r);
  if (m == 0.0) return c.center + c.radius;
  return c.center + r * (c.radius / m);
}

double point_curve_distance(const CurveView& v, Complex z) {
  double best = kInf;
  Complex p = project(v.carrier, z);
  if (on_arc(v, p, 0.0)) best = std::abs(z - p);
  for (Complex e : v.finite_ends) best = std::min(best, std::abs(z - e));
  return best;
}

bool carriers_coincide(const Carrier& a, const Carrier& b) {
  if (a.is_line != b.is_line) return false;
  if (a.is_line) {
    Complex da = a.direction / std::abs(a.direction);
    Complex db = b.direction / std::abs(b.direction);
    if (std::abs(cross(da, db)) > 1e-13) return false;
    return std::abs(cross(da, b.origin - a.origin)) <= 1e-12 * (1.0 + std::abs(a.origin));
  }
  double scale = 1.0 + a.radius;
  return std::abs(a.center - b.center) <= 1e-12 * scale && std::abs(a.radius - b.radius) <= 1e-12 * scale;
}

double param_in(const CurveView& v, const CurveView& other, bool want_lo) {
  bool ideal = want_lo ? other.lo_ideal : other.hi_ideal;
  if (ideal) {
    const HPoint& p = want_lo ? other.ideal_lo : other.ideal_hi;
    return p.approx_equal(v.frame.repelling(), 1e-9) ? -kInf : kInf;
  }
  Complex z = want_lo ? other.finite_ends.front() : other.finite_ends.back();
  return v.frame.param(z);
}

struct RawHits {
  std::vector<Complex> points;
  bool tangent = false;
  Complex where{};
};

RawHits carrier_hits(const CurveView& v1, const CurveView& v2, double tau_sep) {
  const double tol_s = 1e-9;
  RawHits out;
  const Carrier& a = v1.carrier;
  const Carrier& b = v2.carrier;
  auto consider = [&](Complex z) {
    if (on_arc(v1, z, tol_s) && on_arc(v2, z, tol_s)) out.points.push_back(z);
  };
  auto near_touch = [&](Complex p1, Complex p2) {
    if (std::abs(p1 - p2) >= tau_sep) return;
    if (on_arc(v1, p1, 1e-7) && on_arc(v2, p2, 1e-7)) {
      out.tangent = true;
      out.where = p1;
    }
  };
  if (a.is_line && b.is_line) {
    Complex d1 = a.direction, d2 = b.direction;
    double cr = cross(d1, d2);
    if (std::abs(cr) < 1e-14 * std::abs(d1) * std::abs(d2)) return out;
    double t = cross(b.origin - a.origin, d2) / cr;
    consider(a.origin + t * d1);
    return out;
  }
  if (a.is_line != b.is_line) {
    const Carrier& line = a.is_line ? a : b;
    const Carrier& circ = a.is_line ? b : a;
    Complex u = line.direction / std::abs(line.direction);
    Complex f = line.origin + u * ((circ.center - line.origin) * std::conj(u)).real();
    double delta = std::abs(circ.center - f);
    double h2 = circ.radius * circ.radius - delta * delta;
    if (h2 < 0.0) {
      Complex on_circ = circ.center + (f - circ.center) * (circ.radius / delta);
      if (a.is_line)
        near_touch(f, on_circ);
      else
        near_touch(on_circ, f);
      return out;
    }
    double h = std::sqrt(h2);
    if (2.0 * h < tau_sep) {
      near_touch(f, f);
      return out;
    }
    consider(f + h * u);
    consider(f - h * u);
    return out;
  }
  Complex dc = b.center - a.center;
  double d = std::abs(dc);
  if (d == 0.0) return out;
  Complex u = dc / d;
  double x = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
  double h2 = a.radius * a.radius - x * x;
  if (h2 < 0.0) {
    Complex p1, p2;
    if (d > a.radius + b.radius) {
      p1 = a.center + a.radius * u;
      p2 = b.center - b.radius * u;
    } else if (a.radius > b.radius) {
      p1 = a.center + a.radius * u;
      p2 = b.center + b.radius * u;
    } else {
      p1 = a.center - a.radius * u;
      p2 = b.center - b.radius * u;
    }
    near_touch(p1, p2);
    return out;
  }
  double h = std::sqrt(h2);
  Complex base = a.center + x * u;
  if (2.0 * h < tau_sep) {
    near_touch(base, base);
    return out;
  }
  Complex perp = u * Complex(0.0, 1.0);
  consider(base + h * perp);
  consider(base - h * perp);
  return out;
}

}  // namespace

std::array<double, 4> curve_bbox(const Curve& c) {
  CurveView v = make_view(c);
  std::array<double, 4> box{kInf, kInf, -kInf, -kInf};
  auto add = [&](Complex z) {
    box[0] = std::min(box[0], z.real());
    box[1] = std::min(box[1], z.imag());
    box[2] = std::max(box[2], z.real());
    box[3] = std::max(box[3], z.imag());
  };
  for (Complex e : v.finite_ends) add(e);
  if (v.lo_ideal || v.hi_ideal) {
    box = {-kInf, 0.0, kInf, kInf};
    return box;
  }
  if (!v.carrier.is_line) {
    const Complex& ctr = v.carrier.center;
    double r = v.carrier.radius;
    for (Complex z : {ctr + r, ctr - r, ctr + Complex(0.0, r)})
      if (on_arc(v, z, 0.0)) add(z);
  }
  return box;
}

std::vector<Complex> seg_intersect(const Curve& s1, const Curve& s2, double tau_sep) {
  CurveView v1 = make_view(s1);
  CurveView v2 = make_view(s2);
  std::vector<Complex> pts;

  if (carriers_coincide(v1.carrier, v2.carrier)) {
    double a = param_in(v1, v2, true), b = param_in(v1, v2, false);
    double lo = std::max(v1.lo, std::min(a, b));
    double hi = std::min(v1.hi, std::max(a, b));
    if (hi - lo > 1e-9) fail(ErrorKind::Tangency, "curves overlap along a common carrier");
    // touching ends are picked up by the endpoint checks below
  } else {
    RawHits hits = carrier_hits(v1, v2, tau_sep);
    if (hits.tangent) {
      fail(ErrorKind::Tangency, "curves approach within tau_sep near (" + std::to_string(hits.where.real()) +
                                    ", " + std::to_string(hits.where.imag()) + ")");
    }
    pts = hits.points;
  }

  auto near_existing = [&](Complex z, double tol) {
    return std::any_of(pts.begin(), pts.end(), [&](Complex p) { return std::abs(p - z) <= tol; });
  };
  auto endpoint_checks = [&](const CurveView& from, const CurveView& to) {
    for (Complex e : from.finite_ends) {
      double dd = point_curve_distance(to, e);
      double touch = 1e-9 * (1.0 + std::abs(e));
      if (dd <= touch) {
        if (!near_existing(e, 1e-8 * (1.0 + std::abs(e)))) pts.push_back(e);
      } else if (double sep = tau_sep * std::min(1.0, e.imag()); dd < sep && !near_existing(e, sep)) {
        fail(ErrorKind::Tangency, "endpoint (" + std::to_string(e.real()) + ", " + std::to_string(e.imag()) +
                                      ") within tau_sep of the other curve");
      }
    }
  };
  endpoint_checks(v1, v2);
  endpoint_checks(v2, v1);

  std::vector<Complex> unique;
  for (Complex p : pts)
    if (std::none_of(unique.begin(), unique.end(),
                     [&](Complex q) { return std::abs(p - q) <= 1e-8 * (1.0 + std::abs(p)); }))
      unique.push_back(p);
  std::sort(unique.begin(), unique.end(),
            [&](Complex p, Complex q) { return v1.frame.param(p) < v1.frame.param(q); });
  return unique;
}

// ---------------------------------------------------------------- distances

double dist(Complex p, Complex q) {
  if (!(p.imag() > 0.0) || !(q.imag() > 0.0)) fail(ErrorKind::BoundaryPoint, "dist needs interior points");
  return 2.0 * std::asinh(std::abs(p - q) / (2.0 * std::sqrt(p.imag() * q.imag())));
}

double dist(const HPoint& p, const HPoint& q) {
  if (!p.is_interior() || !q.is_interior()) fail(ErrorKind::BoundaryPoint, "dist needs interior points");
  return dist(p.z(), q.z());
}

namespace {

double ideal_key(const HPoint& p) { return p.is_infinity() ? kInf : p.x(); }

bool same_ideal(const HPoint& a, const HPoint& b) {
  if (a.is_infinity() || b.is_infinity()) return a.is_infinity() && b.is_infinity();
  return std::abs(a.x() - b.x()) <= 1e-12 * (1.0 + std::abs(a.x()));
}

}  // namespace

bool ideal_pairs_interleave(const HPoint& a1, const HPoint& b1, const HPoint& a2, const HPoint& b2) {
  if (same_ideal(a1, a2) || same_ideal(a1, b2) || same_ideal(b1, a2) || same_ideal(b1, b2)) return false;
  double lo = std::min(ideal_key(a1), ideal_key(b1));
  double hi = std::max(ideal_key(a1), ideal_key(b1));
  auto inside = [&](const HPoint& p) {
    double k = ideal_key(p);
    return k > lo && k < hi;
  };
  return inside(a2) != inside(b2);
}

double geodesic_distance(const HPoint& a1, const HPoint& b1, const HPoint& a2, const HPoint& b2) {
  if (same_ideal(a1, a2) || same_ideal(a1, b2) || same_ideal(b1, a2) || same_ideal(b1, b2)) return 0.0;
  if (ideal_pairs_interleave(a1, b1, a2, b2)) return 0.0;
  AxisFrame f(a1, b1);
  HPoint p = f.standardizer().apply(a2);
  HPoint q = f.standardizer().apply(b2);
  double P = std::abs(p.x()), Q = std::abs(q.x());
  if (P > Q) std::swap(P, Q);
  double sp = std::sqrt(P), sq = std::sqrt(Q);
  return std::log((sq + sp) / (sq - sp));
}

double ideal_angle(const HPoint& p) {
  if (p.is_interior()) fail(ErrorKind::InvalidArgument, "ideal_angle of an interior point");
  return p.is_infinity() ? M_PI : 2.0 * std::atan(p.x());
}

GeodesicRelation relate_geodesics(const HPoint& a1, const HPoint& b1, const HPoint& a2, const HPoint& b2,
                                  double angle_tol) {
  auto close = [angle_tol](double x, double y) {
    double d = std::abs(x - y);
    return std::min(d, 2.0 * M_PI - d) <= angle_tol;
  };
  double p = ideal_angle(a1), q = ideal_angle(b1), r = ideal_angle(a2), t = ideal_angle(b2);
  bool pr = close(p, r), pt = close(p, t), qr = close(q, r), qt = close(q, t);
  if ((pr && qt) || (pt && qr)) return GeodesicRelation::Same;
  if (pr || pt || qr || qt) return GeodesicRelation::SharedEndpoint;
  double lo = std::min(p, q), hi = std::max(p, q);
  bool in_r = r > lo && r < hi;
  bool in_t = t > lo && t < hi;
  return in_r != in_t ? GeodesicRelation::Crossing : GeodesicRelation::Disjoint;
}

double min_abs_offset(const GeodesicSeg& seg, const AxisFrame& frame) {
  Complex p = seg.start().z(), q = seg.end().z();
  double f0 = std::sinh(frame.offset(p));
  double fl = std::sinh(frame.offset(q));
  if (f0 * fl <= 0.0) return 0.0;
  double len = dist(p, q);
  double best = std::min(std::abs(f0), std::abs(fl));
  if (len > 1e-12) {
    double a = f0;
    double b = (fl - a * std::cosh(len)) / std::sinh(len);
    if (std::abs(b) < std::abs(a)) {
      double t = std::atanh(-b / a);
      if (t > 0.0 && t < len) best = std::min(best, std::abs(a * std::cosh(t) + b * std::sinh(t)));
    }
  }
  return std::asinh(best);
}

HypercycleSeg equidistant_offset(const GeodesicSeg& axis, double d, double s_from, double s_to) {
  if (!axis.is_complete()) fail(ErrorKind::InvalidArgument, "equidistant_offset needs a complete axis");
  return HypercycleSeg(axis.frame(), d, s_from, s_to);
}

}  // namespace cp1
