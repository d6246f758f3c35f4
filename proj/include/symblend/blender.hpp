#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symblend/fiber.hpp"
#include "symblend/ifs.hpp"
#include "symblend/io.hpp"

namespace symblend {

class Rng;

enum class DiskKind { Flat, Tilted, Random, Graph };
const char* to_string(DiskKind k);

// Graph of h over W^s_loc(ζ) with Hölder data (α, C) and slack δ.
struct HorizontalDisk {
  BiSequence zeta;
  Vec z;
  double alpha = 1, nu = 0.5, C = 0, delta = 0;
  DiskKind kind = DiskKind::Flat;
  // Tilted/random disks: h(ξ) = z + c·Σ_{j=1..J} ε(ξ_{−j})·ν^{αj}.
  double c = 0;
  std::vector<Vec> eps;
  // Graph disks: arbitrary evaluator (not serializable).
  std::function<Vec(const BiSequence&)> fn;

  static HorizontalDisk flat(BiSequence zeta, Vec z, double delta, double alpha = 1, double nu = 0.5);
  static HorizontalDisk tilted(BiSequence zeta, Vec z, double c, std::vector<Vec> eps, double delta, double alpha = 1,
                               double nu = 0.5, DiskKind kind = DiskKind::Tilted);
  static HorizontalDisk graph(BiSequence zeta, Vec z, std::function<Vec(const BiSequence&)> h, double C, double delta,
                              double alpha = 1, double nu = 0.5);

  Vec operator()(const BiSequence& xi) const;
  Json to_json() const;
  static HorizontalDisk from_json(const Json& j, int dim);
};

struct DiskValidation {
  bool valid = false;
  std::string reason;
  double measured_holder = 0;  // largest sampled quotient ‖h(ξ) − h(ξ′)‖/d(ξ,ξ′)^α
  double max_offset = 0;       // largest sampled ‖z − h(ξ)‖
  double min_depth_in_B = 0;   // smallest sampled depth of h(ξ) (and z) inside B
};

DiskValidation validate_disk(const HorizontalDisk& H, const Box& B, int k, int samples, Rng& rng);

// Member boxes B_i: for each symbol i, the intersection of ψ(B) over table entries with central symbol i,
// deflated by the perturbation budget t.
std::vector<Box> blender_members(const SkewProduct& psi, const Box& B, double budget, int k_used = 0);

struct StepDiagnostic {
  int n = 0;
  int symbol = 0;
  double v_radius = 0;        // C·ν^{nα}
  double v_measured = 0;      // sampled diam of h over the depth-n relative cylinder
  double a_diameter = 0;      // inflated enclosure of A_n
  double a_pad = 0;           // backward-divergence pad
  double member_margin = 0;   // depth of A_n inside the chosen member
};

struct IntersectionResult {
  bool success = false;
  std::string failure;
  BiSequence xi;
  Vec x;
  Word word;  // ω_{−N} … ω_{−1} in index order
  double min_margin = 0;  // min over n ≤ N of the depth of ψ^{−n}(x) inside B
  std::vector<StepDiagnostic> steps;
  bool diameter_laws = true;  // measured diam V_n ≤ Cν^{nα} and diam A_n < L at every step
  std::optional<Box> offending_set;
  Json to_json() const;
};

struct IntersectionSetup {
  Box B;
  std::vector<Box> members;
  double L = 0;  // Lebesgue lower bound of the members on B̄
  int k_used = 0;  // symbols usable in the past word (0 = all)
};

IntersectionSetup intersection_setup(const SkewProduct& psi, const Box& B, double budget, int k_used = 0, int resolution = 10);

// Precondition failures are returned as an unsuccessful result with the reason; nothing is thrown.
IntersectionResult disk_intersect(const SkewProduct& psi, const IntersectionSetup& setup, const HorizontalDisk& H, int N,
                                  std::uint64_t seed = 1, int diameter_samples = 8);
IntersectionResult embedded_disk_intersect(const SkewProduct& psi_hat, int k, const IntersectionSetup& setup,
                                           const HorizontalDisk& H, int N, std::uint64_t seed = 1);

// Backward orbit ψ^{−n}_{τ^{−1}ξ}(x), n = 0..N; margins inside the open box B.
std::vector<Vec> backward_orbit(const SkewProduct& psi, const BiSequence& xi, const Vec& x, int N);
double backward_margin(const SkewProduct& psi, const BiSequence& xi, const Vec& x, const Box& B, int N);

struct BruteForceResult {
  std::vector<Word> admissible;  // index-order past words of length N
  bool any() const { return !admissible.empty(); }
};

BruteForceResult brute_force_words(const SkewProduct& psi, const Box& B, const HorizontalDisk& H, int N, int k_used = 0);

double backward_divergence_bound(const SkewProduct& psi, int i, double d_alpha);

struct DivergenceSample {
  double measured = 0, bound = 0;
  double ratio() const { return bound > 0 ? measured / bound : (measured > 0 ? INFINITY : 0); }
};

// Measure ‖ψ^{−i}_{τ^{−1}ξ}(x) − ψ^{−i}_{τ^{−1}ζ}(x)‖ for ξ, ζ drawn from the cylinder [word at offset].
DivergenceSample measure_backward_divergence(const SkewProduct& psi, const Cylinder& cyl, const Vec& x, int i,
                                             const BiSequence& xi, const BiSequence& zeta);

struct BlenderConfig {
  double budget = 0.005;
  int depth = 30;
  int disks = 20;
  int perturbations = 5;
  double safety = 0.1;
  int resolution = 10;
  std::uint64_t seed = 1;
};

struct TestedDisk {
  HorizontalDisk disk;
  DiskValidation validation;
  IntersectionResult result;
  int perturbation = 0;
};

struct BlenderCertificate {
  bool passed = false;
  std::string failed_stage;
  std::string reason;
  CoveringCertificate covering;
  CoveringCertificate shrunk_covering;
  double L = 0;
  double delta_max = 0;
  double lambda = 0, beta = 0;
  double neighbourhood_radius = 0;
  double max_budget_sum = 0;  // max over perturbations of C_Ψ Σ (λ^{−1}ν^α)^i
  std::vector<std::vector<Vec>> perturbations;
  std::vector<TestedDisk> tested;
  bool cu = false;
  Json to_json() const;
};

HorizontalDisk random_disk(DiskKind kind, const Box& B, int k, int dim, double delta, double alpha, double nu, Rng& rng);

BlenderCertificate certify_blender(const SkewProduct& phi, const Box& B, const BlenderConfig& cfg);
BlenderCertificate certify_cu_blender(const SkewProduct& phi, const Box& B, const BlenderConfig& cfg);

}  // namespace symblend
