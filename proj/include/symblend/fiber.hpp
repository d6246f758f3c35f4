#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symblend/geometry.hpp"
#include "symblend/sequence.hpp"

namespace symblend {

class Rng;

enum class MapKind { Affine, PiecewiseLinear, User };

class FiberMap {
 public:
  static FiberMap affine(Vec a, Vec b);
  // Increasing 1-D piecewise-linear map through (xs[i], ys[i]), extended linearly past the end knots.
  static FiberMap piecewise_linear(std::vector<double> xs, std::vector<double> ys);
  // Declared (λ, β) are verified on 10^4 sampled pairs in `verify_on`; throws on violation.
  static FiberMap user(int dim, std::function<Vec(const Vec&)> f, std::function<Vec(const Vec&)> finv, double lambda,
                       double beta, const Box& verify_on, std::uint64_t seed = 1);
  static FiberMap identity(int dim) { return affine(vec_fill(dim, 1.0), vec_fill(dim, 0.0)); }

  MapKind kind() const { return kind_; }
  bool certified() const { return kind_ != MapKind::User; }
  int dim() const { return dim_; }

  Vec operator()(const Vec& x) const;
  Vec inverse_apply(const Vec& y) const;
  FiberMap inverse() const;
  FiberMap translated(const Vec& t) const;

  // Two-sided Lipschitz bounds on the given domain (exact for affine and piecewise-linear maps).
  std::pair<double, double> lipschitz(const Box& domain) const;
  Box image(const Box& b) const;
  Box preimage(const Box& b) const;

  // sup over D̄ of ‖f − g‖ (or of the inverses).
  double c0_distance(const FiberMap& g, const Box& D, bool inverses = false) const;

  const Vec& a() const { return a_; }
  const Vec& b() const { return b_; }
  const std::vector<double>& knots_x() const { return xs_; }
  const std::vector<double>& knots_y() const { return ys_; }
  std::pair<double, double> declared() const { return {lam_, bet_}; }

 private:
  FiberMap() = default;
  MapKind kind_ = MapKind::Affine;
  int dim_ = 1;
  Vec a_, b_;
  std::vector<double> xs_, ys_;
  std::shared_ptr<std::function<Vec(const Vec&)>> f_, finv_;
  double lam_ = 0, bet_ = 0;
};

struct PHConstants {
  double lambda = 0, beta = 0, alpha = 1, nu = 0.5;
  std::optional<double> mu;
  bool s_domination() const;
  bool u_domination() const;
  bool partially_hyperbolic() const;
};

class SkewProduct {
 public:
  SkewProduct(int k, int depth, std::vector<FiberMap> table, Box D, double alpha = 1.0, double nu = 0.5);
  static SkewProduct one_step(std::vector<FiberMap> maps, Box D, double alpha = 1.0, double nu = 0.5) {
    int k = static_cast<int>(maps.size());
    return {k, 0, std::move(maps), std::move(D), alpha, nu};
  }

  int k() const { return k_; }
  int depth() const { return depth_; }
  int dim() const { return D_.dim(); }
  const Box& D() const { return D_; }
  double alpha() const { return alpha_; }
  double nu() const { return nu_; }
  double lambda() const { return lambda_; }
  double beta() const { return beta_; }
  double holder() const { return holder_; }
  PHConstants constants() const { return {lambda_, beta_, alpha_, nu_, std::nullopt}; }
  bool contracting() const { return beta_ < 1; }
  bool expanding() const { return lambda_ > 1; }
  bool certified() const;

  const std::vector<FiberMap>& table() const { return table_; }
  std::size_t code(const Word& central) const;
  Word central_word(std::size_t code) const;
  const FiberMap& entry(const Word& central) const { return table_[code(central)]; }
  // Fiber map of τ^j(ξ).
  const FiberMap& at(const BiSequence& xi, long j = 0) const;
  // One-step systems: the map of symbol i (1-based).
  const FiberMap& symbol_map(int i) const;
  std::vector<FiberMap> one_step_maps() const;

  SkewProduct with_domain(const Box& D) const;
  SkewProduct lifted(int depth) const;
  // Keep the first k symbols (table entries whose words use only 1..k).
  SkewProduct restricted(int k) const;
  // Violations of the regime invariant (φ(D̄) ⊂ D when contracting, D̄ ⊂ φ(D) when expanding).
  std::vector<std::string> regime_violations() const;

 private:
  int k_, depth_;
  std::vector<FiberMap> table_;
  Box D_;
  double alpha_, nu_;
  double lambda_ = 0, beta_ = 0, holder_ = 0;
};

struct DomainEscape : std::runtime_error {
  long step;
  Vec point;
  DomainEscape(long s, Vec p) : std::runtime_error("orbit left the closed domain at step " + std::to_string(s)), step(s), point(std::move(p)) {}
};

// φ_ξ^n(x) = φ_{τ^{n−1}ξ} ∘ ⋯ ∘ φ_ξ(x)
Vec compose_forward(const SkewProduct& phi, const BiSequence& xi, const Vec& x, int n, bool check = true);
// φ_ξ^{−n}(x) = φ^{−1}_{τ^{−(n−1)}ξ} ∘ ⋯ ∘ φ^{−1}_ξ(x)
Vec compose_backward(const SkewProduct& phi, const BiSequence& xi, const Vec& x, int n, bool check = true);

double holder_constant(const SkewProduct& phi);
double skew_distance(const SkewProduct& a, const SkewProduct& b);
SkewProduct inverse_skew_product(const SkewProduct& phi);
double holder_exponent(double mu, double nu);

// Independent translations of every table entry, uniform in the sup-norm ball of radius t.
SkewProduct random_translation(const SkewProduct& phi, double t, Rng& rng);
SkewProduct translate_entries(const SkewProduct& phi, const std::vector<Vec>& shifts);

// C⁰ perturbation of size ≤ t: piecewise-linear maps get independent knot shifts (end knots kept when
// keep_ends is set), other maps a random translation.
FiberMap perturb_map(const FiberMap& f, double t, Rng& rng, bool keep_ends = false);

}  // namespace symblend
