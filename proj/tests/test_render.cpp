#include <gtest/gtest.h>

#include <regex>

#include "cp1/render.hpp"
#include "cp1/scene.hpp"
#include "cp1/surgery.hpp"
#include "support.hpp"

using namespace cp1;

namespace {

// Body of <g id="...">...</g>.
std::string group(const std::string& svg, const std::string& id) {
  auto open = svg.find("<g id=\"" + id + "\">");
  if (open == std::string::npos) return {};
  auto close = svg.find("</g>", open);
  return svg.substr(open, close - open);
}

int count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

// y coordinates of every "M x y" / "L x y" command in the text.
std::vector<double> path_ys(const std::string& text) {
  std::vector<double> ys;
  static const std::regex cmd(R"([ML](-?[0-9.]+) (-?[0-9.]+))");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), cmd); it != std::sregex_iterator(); ++it)
    ys.push_back(std::stod((*it)[2]));
  return ys;
}

LoadedScene degrafting() { return load_scene(read_scene_file(cp1::test::data_path("degrafting.scene"))); }

}  // namespace

TEST(Render, SingleArcOnUniformizing) {
  GraftedStructure u = uniformizing_structure(canonical_rep_ptr(2));
  DevelopedArc arc = develop_polyline(u, {Complex(0, 1), Complex(0.5, 1.5)});
  std::string svg = render_svg({&u, &arc, nullptr});
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_EQ(count(group(svg, "layer-arc"), "<path"), 1);
  EXPECT_EQ(count(group(svg, "layer-axes"), "<path"), 0);
}

TEST(Render, RerouteStaysAboveAxis) {
  LoadedScene ls = degrafting();
  ReroutePlan p = reroute(ls.structure, ls.arc, ls.config);
  std::string svg = render_svg({&ls.structure, &ls.arc, &p});
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, std::regex(R"re(<line id="x-axis" x1="[-0-9.]+" y1="(-?[0-9.]+)")re")));
  double axis_y = std::stod(m[1]);
  auto ys = path_ys(group(svg, "layer-reroute"));
  ASSERT_FALSE(ys.empty());
  for (double y : ys) EXPECT_LT(y, axis_y);
  // detours are drawn as arcs hanging from the axis
  std::string det = group(svg, "layer-detours");
  std::regex arc_re(R"re(L(-?[0-9.]+) (-?[0-9.]+) A[-0-9. ]+ 0 0 ([01]) (-?[0-9.]+) (-?[0-9.]+))re");
  int arcs = 0;
  for (std::sregex_iterator it(det.begin(), det.end(), arc_re), end; it != end; ++it, ++arcs) {
    const auto& a = *it;
    EXPECT_DOUBLE_EQ(std::stod(a[2]), axis_y);
    EXPECT_DOUBLE_EQ(std::stod(a[5]), axis_y);
    bool rightward = std::stod(a[1]) < std::stod(a[4]);
    EXPECT_EQ(a[3] == "0", rightward);
  }
  EXPECT_GT(arcs, 0);
  EXPECT_LT(axis_y, 600.0);
}

TEST(Render, Deterministic) {
  LoadedScene ls = degrafting();
  ReroutePlan p = reroute(ls.structure, ls.arc, ls.config);
  for (RenderModel model : {RenderModel::HalfPlane, RenderModel::Disk}) {
    std::string a = render_svg({&ls.structure, &ls.arc, &p}, {}, model);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(render_svg({&ls.structure, &ls.arc, &p}, {}, model), a);
  }
}

TEST(Render, LayersToggle) {
  LoadedScene ls = degrafting();
  ReroutePlan p = reroute(ls.structure, ls.arc, ls.config);
  RenderScene sc{&ls.structure, &ls.arc, &p};
  std::string none = render_svg(sc, RenderLayers::none());
  for (const char* id : {"layer-axes", "layer-collars", "layer-arc", "layer-reroute", "layer-detours", "layer-labels"})
    EXPECT_EQ(none.find(id), std::string::npos) << id;
  std::string some = render_svg(sc, RenderLayers::parse("arc,labels"));
  EXPECT_NE(some.find("layer-arc"), std::string::npos);
  EXPECT_NE(some.find("layer-labels"), std::string::npos);
  EXPECT_EQ(some.find("layer-reroute"), std::string::npos);
  EXPECT_THROW(RenderLayers::parse("arc,nope"), std::exception);
}

TEST(Render, FixedPrecision) {
  LoadedScene ls = degrafting();
  std::string svg = render_svg({&ls.structure, &ls.arc, nullptr}, {}, RenderModel::Disk);
  EXPECT_NE(svg.find("<circle id=\"boundary\""), std::string::npos);
  static const std::regex number(R"((-?[0-9]+)\.([0-9]+))");
  std::string body = svg.substr(svg.find("</style>"));
  for (auto it = std::sregex_iterator(body.begin(), body.end(), number); it != std::sregex_iterator(); ++it)
    EXPECT_EQ((*it)[2].length(), 6) << (*it)[0];
  EXPECT_EQ(svg.find("-0.000000"), std::string::npos);
}
