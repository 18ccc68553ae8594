#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cp1/config.hpp"
#include "cp1/scene.hpp"

namespace cp1 {

struct AcceptanceOptions {
  std::uint64_t seed = 20240611;
  int random_scenes = 200;
  int unbranched_pairs = 50;
  int branched_pairs = 20;
  int kernel_cases = 1000;
  int roundtrip_scenes = 50;
  int render_runs = 3;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 8;

// Genus 2, {(a1, 1)}, one transversal crossing.
Scene degrafting_scene();
// Genus 2, {(a1, 1), (a2, 2)}, one crossing of each region.
Scene two_region_scene();

CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {}, const Config& cfg = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {}, const Config& cfg = {});

// "PASS 3 name: detail (1.23 s)"
std::string format_result(const CriterionResult& r);

}  // namespace cp1
