#include "cp1/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cp1/error.hpp"

namespace cp1 {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 20.0;
constexpr int kSamples = 64;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

class View {
 public:
  View(RenderModel model, double xmin, double xmax, double ymax) : model_(model) {
    if (model == RenderModel::Disk) {
      scale_ = (std::min(kWidth, kHeight) - 2.0 * kMargin) / 2.0;
      ox_ = kWidth / 2.0;
      oy_ = kHeight / 2.0;
      return;
    }
    // band below the real axis for detours
    const double below = 0.15 * ymax;
    scale_ = std::min((kWidth - 2.0 * kMargin) / (xmax - xmin), (kHeight - 2.0 * kMargin) / (ymax + below));
    ox_ = kWidth / 2.0 - scale_ * 0.5 * (xmin + xmax);
    oy_ = kHeight - kMargin - scale_ * below;
  }

  Complex to_svg(Complex z) const {
    Complex w = model_ == RenderModel::Disk ? halfplane_to_disk(z) : z;
    return {ox_ + scale_ * w.real(), oy_ - scale_ * w.imag()};
  }

  double axis_y() const { return oy_; }
  double scale() const { return scale_; }
  double ox() const { return ox_; }
  double oy() const { return oy_; }

 private:
  RenderModel model_;
  double scale_ = 1.0, ox_ = 0.0, oy_ = 0.0;
};

struct PathBuilder {
  const View& view;
  std::string d;

  void move(Complex z) { point('M', z); }
  void line(Complex z) { point('L', z); }
  void point(char c, Complex z) {
    Complex p = view.to_svg(z);
    if (!d.empty()) d += ' ';
    d += c;
    d += num(p.real()) + " " + num(p.imag());
  }
  void curve(const Curve& c, bool start) {
    for (int k = 0; k <= kSamples; ++k) {
      Complex z = curve_point(c, static_cast<double>(k) / kSamples);
      if (k == 0 && start) move(z);
      else if (k > 0) line(z);
    }
  }
};

std::string path_element(const std::string& d, const std::string& cls) {
  return "<path class=\"" + cls + "\" d=\"" + d + "\"/>\n";
}

std::vector<Curve> h2_curves(const DevelopedArc& arc) {
  std::vector<Curve> out;
  for (const auto& p : arc.pieces) {
    if (const auto* g = std::get_if<GeodesicSeg>(&p)) out.emplace_back(*g);
    if (const auto* h = std::get_if<HypercycleSeg>(&p)) out.emplace_back(*h);
  }
  return out;
}

// Arc as one path; a new subpath starts after every detour.
std::string arc_path(const DevelopedArc& arc, const View& view) {
  PathBuilder b{view, {}};
  bool fresh = true;
  for (const auto& p : arc.pieces) {
    if (is_detour(p)) {
      fresh = true;
      continue;
    }
    Curve c = std::holds_alternative<GeodesicSeg>(p) ? Curve(std::get<GeodesicSeg>(p)) : Curve(std::get<HypercycleSeg>(p));
    b.curve(c, fresh);
    fresh = false;
  }
  return b.d;
}

std::vector<LiftedAxis> scene_lifts(const RenderScene& sc, const Config& cfg) {
  if (!sc.structure || sc.structure->is_uniformizing()) return {};
  if (sc.arc && !sc.arc->pieces.empty()) return arc_lifts(*sc.structure, *sc.arc, cfg);
  return lifts_near(*sc.structure, Complex(0.0, 1.0), 2.0, cfg);
}

}  // namespace

RenderLayers RenderLayers::parse(const std::string& list) {
  if (list == "all") return {};
  RenderLayers l = none();
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "axes") l.axes = true;
    else if (item == "collars") l.collars = true;
    else if (item == "arc") l.arc = true;
    else if (item == "reroute") l.reroute = true;
    else if (item == "detours") l.detours = true;
    else if (item == "labels") l.labels = true;
    else if (!item.empty()) fail(ErrorKind::InvalidArgument, "unknown layer '" + item + "'");
  }
  return l;
}

Complex halfplane_to_disk(Complex z) {
  const Complex i(0.0, 1.0);
  return (z - i) / (z + i);
}

Complex disk_to_halfplane(Complex w) {
  const Complex i(0.0, 1.0);
  return i * (1.0 + w) / (1.0 - w);
}

std::string render_svg(const RenderScene& sc, const RenderLayers& layers, RenderModel model, const Config& cfg) {
  // window from the arc, the rerouted arc and i
  double xmin = -1.0, xmax = 1.0, ymax = 2.0;
  auto include = [&](Complex z) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymax = std::max(ymax, z.imag());
  };
  if (sc.arc)
    for (const auto& c : h2_curves(*sc.arc))
      for (int k = 0; k <= 8; ++k) include(curve_point(c, k / 8.0));
  if (sc.plan)
    for (const auto& c : h2_curves(sc.plan->rerouted))
      for (int k = 0; k <= 8; ++k) include(curve_point(c, k / 8.0));
  double pad = 0.1 * (xmax - xmin);
  xmin -= pad;
  xmax += pad;
  ymax *= 1.1;
  View view(model, xmin, xmax, ymax);

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(kWidth) << "\" height=\""
     << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << " " << num(kHeight) << "\">\n";
  os << "<style>path{fill:none;stroke-width:1.2}.axis{stroke:#555}.collar{stroke:#9bd;stroke-dasharray:3 2}"
        ".arc{stroke:#c33}.reroute{stroke:#36c;stroke-width:1.8}.detour{stroke:#c93}"
        "text{font-family:sans-serif;font-size:11px}</style>\n";
  if (model == RenderModel::HalfPlane) {
    os << "<line id=\"x-axis\" x1=\"0.000000\" y1=\"" << num(view.axis_y()) << "\" x2=\"" << num(kWidth)
       << "\" y2=\"" << num(view.axis_y()) << "\" stroke=\"#000\"/>\n";
  } else {
    os << "<circle id=\"boundary\" cx=\"" << num(view.ox()) << "\" cy=\"" << num(view.oy()) << "\" r=\""
       << num(view.scale()) << "\" fill=\"none\" stroke=\"#000\"/>\n";
  }

  auto lifts = (layers.axes || layers.collars || layers.labels) ? scene_lifts(sc, cfg) : std::vector<LiftedAxis>{};
  const double smax = 8.0;
  if (layers.axes) {
    os << "<g id=\"layer-axes\">\n";
    for (const auto& l : lifts) {
      PathBuilder b{view, {}};
      for (int k = 0; k <= 4 * kSamples; ++k) {
        double s = -smax + 2.0 * smax * k / (4 * kSamples);
        Complex z = l.frame.from_fermi(s, 0.0);
        if (k == 0) b.move(z);
        else b.line(z);
      }
      os << path_element(b.d, "axis");
    }
    os << "</g>\n";
  }
  if (layers.collars && sc.structure && !lifts.empty()) {
    double eps = sc.plan ? sc.plan->table.epsilon : cfg.epsilon_cap;
    os << "<g id=\"layer-collars\">\n";
    for (const auto& l : lifts) {
      for (int h = 1; h <= l.weight; ++h) {
        double c = band_center(l.weight, h, eps);
        for (double u : {c - eps, c + eps}) {
          PathBuilder b{view, {}};
          for (int k = 0; k <= 4 * kSamples; ++k) {
            double s = -smax + 2.0 * smax * k / (4 * kSamples);
            Complex z = l.frame.from_fermi(s, u);
            if (k == 0) b.move(z);
            else b.line(z);
          }
          os << path_element(b.d, "collar");
        }
      }
    }
    os << "</g>\n";
  }
  if (layers.arc && sc.arc && !sc.arc->pieces.empty()) {
    os << "<g id=\"layer-arc\">\n" << path_element(arc_path(*sc.arc, view), "arc") << "</g>\n";
  }
  if (layers.detours && sc.arc && sc.arc->has_detours()) {
    os << "<g id=\"layer-detours\">\n";
    std::vector<const Detour*> ds;
    for (const auto& p : sc.arc->pieces)
      if (const auto* d = std::get_if<Detour>(&p)) ds.push_back(d);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const Detour& d = *ds[i];
      Complex a = d.entry_point(), b = d.exit_point();
      // nesting depth among detours on the same axis
      int depth = 0;
      double lo = std::min(d.s_in, d.s_out), hi = std::max(d.s_in, d.s_out);
      for (std::size_t j = 0; j < ds.size(); ++j) {
        if (j == i || ds[j]->region != d.region || !(ds[j]->lift == d.lift)) continue;
        double l2 = std::min(ds[j]->s_in, ds[j]->s_out), h2 = std::max(ds[j]->s_in, ds[j]->s_out);
        if (l2 <= lo && h2 >= hi && (l2 < lo || h2 > hi)) ++depth;
      }
      Complex pa = view.to_svg(a), pb = view.to_svg(b);
      double foot_a = view.axis_y(), foot_b = view.axis_y();
      double half = std::max(0.5 * std::abs(pa.real() - pb.real()), 1.0);
      double r = half * std::exp(0.25 * depth);
      int sweep = pa.real() < pb.real() ? 0 : 1;
      std::string dpath = "M" + num(pa.real()) + " " + num(pa.imag()) + " L" + num(pa.real()) + " " + num(foot_a) +
                          " A" + num(r) + " " + num(r) + " 0 0 " + std::to_string(sweep) + " " + num(pb.real()) +
                          " " + num(foot_b) + " L" + num(pb.real()) + " " + num(pb.imag());
      os << path_element(dpath, "detour");
    }
    os << "</g>\n";
  }
  if (layers.reroute && sc.plan && !sc.plan->rerouted.pieces.empty()) {
    os << "<g id=\"layer-reroute\">\n" << path_element(arc_path(sc.plan->rerouted, view), "reroute") << "</g>\n";
  }
  if (layers.labels) {
    os << "<g id=\"layer-labels\">\n";
    for (const auto& l : lifts) {
      Complex p = view.to_svg(l.frame.from_fermi(0.0, 0.0));
      os << "<text x=\"" << num(p.real() + 3.0) << "\" y=\"" << num(p.imag() - 3.0) << "\">"
         << sc.structure->region(l.region).word.to_string() << "</text>\n";
    }
    if (sc.arc && !sc.arc->pieces.empty()) {
      Complex s0 = view.to_svg(sc.arc->start()), s1 = view.to_svg(sc.arc->end());
      os << "<text x=\"" << num(s0.real() + 3.0) << "\" y=\"" << num(s0.imag() - 3.0) << "\">start</text>\n";
      os << "<text x=\"" << num(s1.real() + 3.0) << "\" y=\"" << num(s1.imag() - 3.0) << "\">end</text>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace cp1
