#pragma once

#include <cstdint>
#include <optional>

#include "symblend/fiber.hpp"

namespace symblend {

struct LeafValue {
  Vec value;
  double tail = 0;  // bound on ‖γ^n(ξ′) − γ(ξ′)‖
  int depth = 0;
};

// γ^{u,n}_ξ(ξ′) = φ^n_{τ^{−n}ξ′} ∘ (φ^n_{τ^{−n}ξ})^{−1}(x); no domain checks.
Vec unstable_iterate(const SkewProduct& phi, const BiSequence& xi, const BiSequence& xi_prime, const Vec& x, int n);
// (φ^n_{ξ′})^{−1} ∘ φ^n_ξ(x), evaluated directly (used to cross-check the dual route).
Vec stable_iterate_direct(const SkewProduct& phi, const BiSequence& xi, const BiSequence& xi_prime, const Vec& x, int n);

class UnstableGraph {
 public:
  // x defaults to g_Φ(ξ).
  UnstableGraph(const SkewProduct& phi, BiSequence xi, std::optional<Vec> x = std::nullopt, std::optional<int> depth = std::nullopt);
  LeafValue eval(const BiSequence& xi_prime) const;
  LeafValue eval(const BiSequence& xi_prime, int n) const;
  const BiSequence& base() const { return xi_; }
  const Vec& point() const { return x_; }
  double holder_constant() const;  // C_Φ(1 − βν^α)^{−1}
  double tail(int n, double d_alpha = 1.0) const;
  int depth() const { return depth_; }

 private:
  SkewProduct phi_;
  BiSequence xi_;
  Vec x_;
  int depth_;
};

class StableGraph {
 public:
  StableGraph(const SkewProduct& phi, BiSequence xi, Vec x, std::optional<int> depth = std::nullopt);
  LeafValue eval(const BiSequence& xi_prime) const;
  LeafValue eval(const BiSequence& xi_prime, int n) const;
  const BiSequence& base() const { return xi_; }
  const Vec& point() const { return x_; }
  double holder_constant() const;  // C_Φ(1 − λ^{−1}ν^α)^{−1}
  double tail(int n, double d_alpha = 1.0) const;
  int depth() const { return depth_; }

 private:
  SkewProduct phi_;
  SkewProduct dual_;
  BiSequence xi_;
  Vec x_;
  int depth_;
};

int default_lamination_depth(double C, double rate, double tol = 1e-8);

struct InvarianceReport {
  int samples = 0;
  double max_residual = 0;
  double allowed = 0;
  bool passed() const { return max_residual <= allowed; }
};

InvarianceReport invariance_check(const SkewProduct& phi, const UnstableGraph& g, int samples, std::uint64_t seed);
InvarianceReport invariance_check(const SkewProduct& phi, const StableGraph& g, int samples, std::uint64_t seed);

}  // namespace symblend
