#pragma once

#include <array>
#include <complex>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "cp1/config.hpp"

namespace cp1 {

using Complex = std::complex<double>;

// Point of the closed upper half-plane. Boundary points carry no y.
class HPoint {
 public:
  enum class Kind { Interior, Real, Infinity };

  HPoint() = default;
  static HPoint interior(double x, double y);
  static HPoint interior(Complex z) { return interior(z.real(), z.imag()); }
  static HPoint real(double x);
  static HPoint infinity();

  Kind kind() const { return kind_; }
  bool is_interior() const { return kind_ == Kind::Interior; }
  bool is_boundary() const { return kind_ != Kind::Interior; }
  bool is_infinity() const { return kind_ == Kind::Infinity; }

  double x() const;
  double y() const;
  Complex z() const;

  bool approx_equal(const HPoint& o, double tol) const;

 private:
  Kind kind_ = Kind::Interior;
  double x_ = 0.0;
  double y_ = 1.0;
};

class MobiusMap {
 public:
  MobiusMap() = default;
  static MobiusMap from_entries(double a, double b, double c, double d);
  static MobiusMap identity() { return {}; }
  // z -> e^t z
  static MobiusMap dilation(double t);
  // rotation about i by angle theta (counterclockwise)
  static MobiusMap rotation_about_i(double theta);
  static MobiusMap translation(double x);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double trace() const { return a_ + d_; }
  double det() const { return a_ * d_ - b_ * c_; }

  Complex apply(Complex z) const;
  HPoint apply(const HPoint& p) const;
  // derivative modulus at a finite point
  double derivative_abs(Complex z) const;

  MobiusMap inverse() const;
  MobiusMap operator*(const MobiusMap& o) const;

  // Representative with the largest-magnitude entry positive.
  MobiusMap sign_normalized() const;
  // Entrywise distance after sign normalization of both.
  double distance(const MobiusMap& o) const;
  bool approx_equal(const MobiusMap& o, double tol) const { return distance(o) <= tol; }
  bool is_identity(double tol) const { return distance(MobiusMap()) <= tol; }

 private:
  MobiusMap(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {}
  double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
};

enum class MobiusKind { Identity, Elliptic, Parabolic, Hyperbolic };

struct Classification {
  MobiusKind kind = MobiusKind::Identity;
  double translation_length = 0.0;
};

Classification classify(const MobiusMap& m, double tol = kTauAlg);

class GeodesicSeg;

// Orientation-preserving chart sending an oriented geodesic to the imaginary
// axis, repelling end to 0 and attracting end to infinity. Fermi coordinates
// (s, u): s is arc length along the axis, u the signed distance, positive on
// the left.
class AxisFrame {
 public:
  AxisFrame() = default;
  AxisFrame(const HPoint& repelling, const HPoint& attracting);
  static AxisFrame from_standardizer(const MobiusMap& t);

  const MobiusMap& standardizer() const { return t_; }
  HPoint repelling() const;
  HPoint attracting() const;
  GeodesicSeg geodesic() const;

  Complex from_fermi(double s, double u) const;
  std::pair<double, double> to_fermi(Complex z) const;
  double param(Complex z) const { return to_fermi(z).first; }
  double offset(Complex z) const { return to_fermi(z).second; }

  // Same geodesic, origin moved so that the foot of z has s = 0.
  AxisFrame recentered(Complex z) const;
  AxisFrame transformed(const MobiusMap& m) const;
  AxisFrame reversed() const;

 private:
  MobiusMap t_;
  MobiusMap tinv_;
};

struct Axis {
  HPoint repelling;
  HPoint attracting;
};

Axis axis_of(const MobiusMap& m, double tol = kTauAlg);

// Euclidean carrier: a line (origin + direction) or a circle.
struct Carrier {
  bool is_line = false;
  Complex origin{};
  Complex direction{};
  Complex center{};
  double radius = 0.0;
};

class GeodesicSeg {
 public:
  GeodesicSeg() = default;
  GeodesicSeg(const HPoint& p, const HPoint& q);

  const HPoint& start() const { return p_; }
  const HPoint& end() const { return q_; }
  bool is_complete() const { return p_.is_boundary() && q_.is_boundary(); }
  bool is_vertical() const { return vertical_; }
  double line_x() const { return line_x_; }
  double center() const { return center_; }
  double radius() const { return radius_; }
  Carrier carrier() const;

  // Oriented frame of the carrier (start side repelling).
  const AxisFrame& frame() const { return frame_; }
  double s_start() const { return s_p_; }
  double s_end() const { return s_q_; }
  double length() const;
  Complex point_at(double t) const;

  GeodesicSeg reversed() const { return GeodesicSeg(q_, p_); }
  GeodesicSeg transformed(const MobiusMap& m) const { return GeodesicSeg(m.apply(p_), m.apply(q_)); }

 private:
  HPoint p_, q_;
  bool vertical_ = true;
  double line_x_ = 0.0;
  double center_ = 0.0;
  double radius_ = 0.0;
  AxisFrame frame_;
  double s_p_ = 0.0, s_q_ = 0.0;
};

class HypercycleSeg {
 public:
  HypercycleSeg() = default;
  HypercycleSeg(const AxisFrame& frame, double distance, double s_from, double s_to);

  const AxisFrame& frame() const { return frame_; }
  GeodesicSeg axis() const { return frame_.geodesic(); }
  double distance() const { return d_; }
  double s_from() const { return s0_; }
  double s_to() const { return s1_; }
  Complex start() const { return frame_.from_fermi(s0_, d_); }
  Complex end() const { return frame_.from_fermi(s1_, d_); }
  Complex point_at(double t) const { return frame_.from_fermi(s0_ + t * (s1_ - s0_), d_); }
  double length() const;
  Carrier carrier() const;

  HypercycleSeg reversed() const { return HypercycleSeg(frame_, d_, s1_, s0_); }
  HypercycleSeg transformed(const MobiusMap& m) const {
    return HypercycleSeg(frame_.transformed(m), d_, s0_, s1_);
  }

 private:
  AxisFrame frame_;
  double d_ = 0.0;
  double s0_ = 0.0, s1_ = 0.0;
};

using Curve = std::variant<GeodesicSeg, HypercycleSeg>;

Complex curve_start(const Curve& c);
Complex curve_end(const Curve& c);
Complex curve_point(const Curve& c, double t);
Curve curve_transformed(const Curve& c, const MobiusMap& m);
Curve curve_reversed(const Curve& c);
// Euclidean bounding box {xmin, ymin, xmax, ymax} of a finite curve.
std::array<double, 4> curve_bbox(const Curve& c);

double dist(const HPoint& p, const HPoint& q);
double dist(Complex p, Complex q);

// Distance between complete geodesics given by ideal endpoints; 0 when they meet.
double geodesic_distance(const HPoint& a1, const HPoint& b1, const HPoint& a2, const HPoint& b2);
// True iff the complete geodesics (a1,b1) and (a2,b2) cross transversally.
bool ideal_pairs_interleave(const HPoint& a1, const HPoint& b1, const HPoint& a2, const HPoint& b2);
// Position on the boundary circle: 2 atan(x), infinity at pi.
double ideal_angle(const HPoint& p);

enum class GeodesicRelation { Same, SharedEndpoint, Crossing, Disjoint };
// Relation of complete geodesics by ideal endpoints, angles compared at angle_tol.
GeodesicRelation relate_geodesics(const HPoint& a1, const HPoint& b1, const HPoint& a2, const HPoint& b2,
                                  double angle_tol = 1e-8);

// Minimal |u| over a finite geodesic segment, u measured in the given frame.
double min_abs_offset(const GeodesicSeg& seg, const AxisFrame& frame);

std::vector<Complex> seg_intersect(const Curve& s1, const Curve& s2, double tau_sep = kTauSep);

HypercycleSeg equidistant_offset(const GeodesicSeg& axis, double d, double s_from, double s_to);

}  // namespace cp1
