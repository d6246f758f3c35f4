#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symblend/blender.hpp"
#include "symblend/stage.hpp"

namespace symblend {

// One-step Φ̂ on d > k symbols over the fiber window M: φ_1 has an attracting fixed point p ∈ B,
// φ_{k+1} a repelling fixed point q ∈ B, and φ_1…φ_k cover B from inside D.
struct MixingScenario {
  int k = 0;
  double alpha = 1, nu = 0.5;
  Box window;  // M; every map preserves it
  std::vector<FiberMap> maps;
  Box D, B;
  Vec p, q;

  int d() const { return static_cast<int>(maps.size()); }
  Json to_json() const;
  static MixingScenario from_json(const Json& j);
};

enum class Direction { Stable, Unstable };
const char* to_string(Direction d);

struct DensityReport {
  bool rejected = false;
  std::string reason;
  int cells = 0;
  int reached = 0;
  int worst_length = 0;
  int resolution = 5;
  int horizon = 0;
  std::optional<Vec> worst_cell;  // center of a cell never reached
  double fraction() const { return cells ? static_cast<double>(reached) / cells : 0; }
  bool passed() const { return !rejected && cells > 0 && reached == cells; }
  Json to_json() const;
};

// Witness search for W^s/W^u((ϑ, p)) through every cell (length-2 cylinder at offset −1) × (fiber cell of side 2^{−r}).
DensityReport density_check(const std::vector<FiberMap>& maps, const Box& window, int symbol, const Vec& point,
                            Direction direction, int resolution, int horizon);

struct ActivationStep {
  int n = 0;
  bool valid = false;
  std::string reason;
  double measured_holder = 0;
  double holder_bound = 0;  // C_Ψ̂(1 − λ^{−1}ν^α)^{−1}
  bool success = false;
  double margin = 0;
  double return_error = 0;  // ‖Ψ̂^n(witness) − (ξ, x)‖ in the fiber
  Json to_json() const;
};

struct ActivationReport {
  bool rejected = false;
  std::string reason;
  std::vector<ActivationStep> steps;
  std::optional<int> first_success;
  bool passed() const { return !rejected && first_success.has_value(); }
  Json to_json() const;
};

// Disks h_n(ζ) = ψ^{−n}_{τ^{n−1}ζ}(x) over W^s_loc(τ^{−n}ξ), fed to the embedded intersection.
ActivationReport blender_activation(const SkewProduct& psi_hat, int k, int repeller, const Vec& q, const BiSequence& xi,
                                    const Vec& x, const IntersectionSetup& setup, double delta, int n_lo, int n_hi, int N,
                                    std::uint64_t seed);

struct OpenPair {
  Cylinder u_cyl, v_cyl;
  Box u_box, v_box;
  Json to_json() const;
};

struct PairWitness {
  int n = 0;
  BiSequence xi;
  Vec x;
  double margin = 0;  // depth of the image inside the target box (and of x inside the source box)
};

// (ξ, x) ∈ Û with Ψ̂^n(ξ, x) ∈ V̂, built from a stable leg into p, a blender connector and an unstable leg out of q.
std::optional<PairWitness> mixing_witness(const std::vector<FiberMap>& maps, int k, const Box& B, const OpenPair& pair, int n);

struct MixingConfig {
  double budget = 0.005;
  int pairs = 100;
  int horizon = 40;
  int n0_max = 25;
  int perturbations = 20;
  int density_resolution = 5;
  int blender_disks = 4;
  int blender_perturbations = 2;
  int depth = 30;
  int resolution = 10;
  std::uint64_t seed = 1;
};

struct MixingReport : StagedReport {
  Json to_json() const;
  Json pairs = Json::array();
  Json perturbations = Json::array();
  int max_n0 = 0;
};

std::vector<OpenPair> random_pairs(int d, const Box& window, int count, Rng& rng);
MixingReport verify_mixing(const MixingScenario& s, const MixingConfig& cfg);

}  // namespace symblend
