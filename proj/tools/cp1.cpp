#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "cp1/acceptance.hpp"
#include "cp1/config.hpp"
#include "cp1/error.hpp"
#include "cp1/render.hpp"
#include "cp1/scene.hpp"
#include "cp1/surgery.hpp"

namespace {

enum Exit { kOk = 0, kDomain = 1, kUsage = 2 };

struct Common {
  std::string verify;
  std::optional<std::uint64_t> seed;
};

cp1::Config base_config(const Common& c) {
  cp1::Config cfg = cp1::config_from_environment();
  if (c.verify == "off") cfg.verify = false;
  if (c.verify == "on") cfg.verify = true;
  return cfg;
}

cp1::LoadedScene load(const std::string& path, const cp1::Config& cfg, const Common& c) {
  cp1::Scene sc = cp1::read_scene_file(path);
  if (!c.verify.empty()) sc.settings.emplace_back("verify", c.verify == "on" ? "true" : "false");
  return cp1::load_scene(sc, cfg);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) cp1::fail(cp1::ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
}

std::string table_report(const cp1::CrossingTable& t) {
  std::ostringstream os;
  os << "epsilon: " << t.epsilon << "\n";
  for (const auto& tab : t.tables) {
    os << "region " << tab.region << " annulus " << tab.annulus << ": " << tab.count() << " crossings, sigma [";
    for (std::size_t k = 0; k < tab.sigma.size(); ++k) os << (k ? " " : "") << tab.sigma[k];
    os << "], coherence [";
    for (int k = 1; k <= tab.count(); ++k) os << (k > 1 ? " " : "") << tab.beta(k).coherence;
    os << "]\n";
  }
  return os.str();
}

int cmd_validate(const std::string& path, const Common& c) {
  cp1::Config cfg = base_config(c);
  cp1::LoadedScene ls = load(path, cfg, c);
  auto d = cp1::decomposition_summary(ls.structure);
  int crossings = 0;
  std::string tables;
  if (ls.has_arc()) {
    cp1::validate_bubbleable(ls.structure, ls.arc, ls.config);
    cp1::CrossingTable t = cp1::extract_crossings(ls.structure, ls.arc, ls.config);
    crossings = t.crossing_count();
    tables = table_report(t);
  }
  std::cout << "multicurve: " << ls.structure.multicurve().to_string() << "\n";
  for (const auto& r : d.regions)
    std::cout << "region " << r.component << " weight " << r.weight << ": " << r.negative_annuli << " negative, "
              << r.positive_annuli << " positive annuli, " << r.real_curves << " real curves\n";
  std::cout << tables;
  std::cout << "real_curves: " << d.real_curves << ", crossings: " << crossings << "\n";
  return kOk;
}

int cmd_reroute(const std::string& path, const std::string& svg, const std::string& report,
                const std::string& layers, const std::string& model, const Common& c) {
  cp1::Config cfg = base_config(c);
  cp1::LoadedScene ls = load(path, cfg, c);
  if (!ls.has_arc()) cp1::fail(cp1::ErrorKind::DegenerateEndpoint, "scene has no arc");
  cp1::ReroutePlan plan = cp1::reroute(ls.structure, ls.arc, ls.config);
  std::string text = cp1::plan_report(plan);
  if (!report.empty()) write_file(report, text);
  if (!svg.empty()) {
    cp1::RenderScene rs{&ls.structure, &ls.arc, &plan};
    auto m = model == "disk" ? cp1::RenderModel::Disk : cp1::RenderModel::HalfPlane;
    write_file(svg, cp1::render_svg(rs, cp1::RenderLayers::parse(layers), m, ls.config));
  }
  std::cout << "steps: " << plan.steps.size() << ", endpoint_residual: " << plan.endpoint_residual
            << ", min_imaginary: " << plan.min_imaginary << ", verified: " << (plan.verified ? "yes" : "no") << "\n";
  std::cout << "result multicurve: " << plan.result.multicurve().to_string() << "\n";
  return kOk;
}

cp1::BranchedStructure as_branched(const cp1::LoadedScene& ls) {
  if (!ls.has_arc()) cp1::fail(cp1::ErrorKind::DegenerateEndpoint, "branched scenes need a bubbling arc");
  return cp1::bubble(ls.structure, ls.arc, ls.config);
}

int cmd_plan_join(const std::string& a, const std::string& b, bool branched, const std::string& report,
                  const Common& c) {
  cp1::Config cfg = base_config(c);
  cp1::LoadedScene sa = load(a, cfg, c), sb = load(b, cfg, c);
  if (sa.scene.genus != sb.scene.genus) cp1::fail(cp1::ErrorKind::InvalidArgument, "scenes differ in genus");
  cp1::MoveSequence seq;
  int bound = 2;
  if (branched) {
    cp1::BranchedStructure ba = as_branched(sa), bb = as_branched(sb);
    seq = cp1::plan_join_branched(ba, bb, cfg);
    if (cfg.verify) cp1::replay_moves(seq, ba, cfg);
    bound = 3;
  } else {
    seq = cp1::plan_join(sa.structure, sb.structure, cfg);
    if (cfg.verify) cp1::replay_moves(seq, cfg);
  }
  std::string text = seq.report();
  if (!report.empty()) write_file(report, text);
  std::cout << text;
  if (seq.bubblings() > bound || seq.debubblings() > bound) {
    std::cerr << "move count exceeds " << bound << " + " << bound << "\n";
    return kDomain;
  }
  return kOk;
}

int cmd_selftest(const Common& c, int only) {
  cp1::AcceptanceOptions opt;
  if (c.seed) opt.seed = *c.seed;
  cp1::Config cfg = base_config(c);
  bool ok = true;
  auto emit = [&](const cp1::CriterionResult& r) {
    std::cout << cp1::format_result(r) << std::endl;
    ok = ok && r.pass;
  };
  if (only > 0) {
    emit(cp1::run_criterion(only, opt, cfg));
  } else {
    for (const auto& r : cp1::run_acceptance(opt, cfg)) emit(r);
  }
  return ok ? kOk : kDomain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex projective structures: grafting, bubbling and rerouting"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--verify", common.verify, "Run the certifying oracles")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--seed", common.seed, "Seed for randomized checks");

  std::string scene, scene_b, svg, report, layers = "all", model = "halfplane";
  bool branched = false;
  int only = 0;

  auto* validate = app.add_subcommand("validate", "Check a scene and print its decomposition");
  validate->add_option("scene", scene)->required();

  auto* rr = app.add_subcommand("reroute", "Reroute the scene arc and degraft");
  rr->add_option("scene", scene)->required();
  rr->add_option("--svg", svg, "Write an SVG rendering");
  rr->add_option("--report", report, "Write the plan report");
  rr->add_option("--layers", layers, "Render layers: all or a comma separated list");
  rr->add_option("--model", model, "Render model")->check(CLI::IsMember({"halfplane", "disk"}));

  auto* join = app.add_subcommand("plan-join", "Join two scenes by bubblings and debubblings");
  join->add_option("source", scene)->required();
  join->add_option("target", scene_b)->required();
  join->add_flag("--branched", branched, "Treat each scene as the bubbling of its arc");
  join->add_option("--report", report, "Write the move report");

  auto* self = app.add_subcommand("selftest", "Run the acceptance suite");
  self->add_option("--criterion", only, "Run one criterion")->check(CLI::Range(1, cp1::kCriterionCount));

  for (auto* sub : {validate, rr, join, self}) {
    sub->add_option("--verify", common.verify, "Run the certifying oracles")->check(CLI::IsMember({"on", "off"}));
    sub->add_option("--seed", common.seed, "Seed for randomized checks");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(scene, common);
    if (*rr) return cmd_reroute(scene, svg, report, layers, model, common);
    if (*join) return cmd_plan_join(scene, scene_b, branched, report, common);
    if (*self) return cmd_selftest(common, only);
  } catch (const cp1::Error& e) {
    std::cerr << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kUsage;
}
