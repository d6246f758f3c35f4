#pragma once

#include <cstdint>
#include <vector>

#include "symblend/blender.hpp"
#include "symblend/stage.hpp"

namespace symblend {

// Covering maps φ_1…φ_k (contracting on D_cs, expanding on D_cu) plus transitions φ_{k+1}, φ_{k+2}.
struct CycleScenario {
  int k = 0;
  double alpha = 1, nu = 0.5;
  Box window;  // fiber region where the global Lipschitz bounds γ, γ̂^{−1} are measured
  std::vector<FiberMap> maps;
  Box D_cs, D_cu, B_cs, B_cu;
  Vec x, y;  // φ_{k+1}^n(x) ∈ B_cu, φ_{k+2}^m(y) ∈ B_cs
  int n = 0, m = 0;

  Json to_json() const;
  static CycleScenario from_json(const Json& j);
};

struct CycleConfig {
  double budget = 0.005;
  int depth = 30;
  int perturbations = 20;
  int blender_disks = 4;
  int blender_perturbations = 2;
  double safety = 0.1;
  int resolution = 10;
  std::uint64_t seed = 1;
};

struct CycleReport : StagedReport {
  int perturbations_run = 0;
  Json legs = Json::array();  // per perturbation: both witnesses
  Json to_json() const;
};

CycleReport verify_cycle(const CycleScenario& s, const CycleConfig& cfg);

}  // namespace symblend
