#pragma once

#include <cstdint>
#include <vector>

#include "symblend/fiber.hpp"
#include "symblend/geometry.hpp"

namespace symblend {

struct GraphValue {
  Vec value;
  double error = 0;  // β^N·diam(D̄)
};

// g_Φ(ξ) ≈ φ^N_{τ^{−N}ξ}(center of D).
GraphValue evaluate_graph(const SkewProduct& phi, const BiSequence& xi, int N = 40);
int default_graph_depth(const SkewProduct& phi, double tol);

struct PeriodicPoint {
  Word period;       // ϑ = period^∞ with ϑ_0 = period[0]
  BiSequence theta;
  Vec p;             // fixed point of φ^n_ϑ
  double residual = 0;
  double multiplier = 0;  // Lipschitz bound of the return map on D̄ (< 1: attracting)
};

std::vector<PeriodicPoint> periodic_points(const SkewProduct& phi, int max_period);

struct GraphImage {
  BoxSet set;
  double pointwise_error = 0;  // radius of each box around its representative value
  double tolerance = 0;        // bound on d_H(set, K_Φ)
  int depth = 0;
  int N = 0;
};

GraphImage graph_image(const SkewProduct& phi, int depth, int N = 40, int resolution = 10);

struct ContinuityReport {
  double budget = 0;
  int trials = 0;
  double max_distance = 0;  // measured d_H(K_Φ, K_Ψ)
  double bound = 0;         // t/(1−β) + 2·cell + attractor tolerances
  bool passed() const { return max_distance <= bound; }
};

ContinuityReport continuity_probe(const SkewProduct& phi, double t, int trials, std::uint64_t seed, int resolution = 10);

}  // namespace symblend
