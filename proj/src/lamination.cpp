#include "symblend/lamination.hpp"

#include <algorithm>
#include <cmath>

#include "symblend/invariant_graph.hpp"
#include "symblend/rng.hpp"

namespace symblend {

Vec unstable_iterate(const SkewProduct& phi, const BiSequence& xi, const BiSequence& xi_prime, const Vec& x, int n) {
  Vec y = x;
  for (long j = 1; j <= n; ++j) y = phi.at(xi, -j).inverse_apply(y);
  for (long j = n; j >= 1; --j) y = phi.at(xi_prime, -j)(y);
  return y;
}

Vec stable_iterate_direct(const SkewProduct& phi, const BiSequence& xi, const BiSequence& xi_prime, const Vec& x, int n) {
  Vec y = x;
  for (long j = 0; j < n; ++j) y = phi.at(xi, j)(y);
  for (long j = n - 1; j >= 0; --j) y = phi.at(xi_prime, j).inverse_apply(y);
  return y;
}

int default_lamination_depth(double C, double rate, double tol) {
  if (!(rate < 1)) throw std::invalid_argument("lamination depth: rate must be < 1");
  if (C == 0) return 1;
  int n = 1;
  while (C * std::pow(rate, n) / (1 - rate) >= tol && n < 10000) ++n;
  return n;
}

UnstableGraph::UnstableGraph(const SkewProduct& phi, BiSequence xi, std::optional<Vec> x, std::optional<int> depth)
    : phi_(phi), xi_(std::move(xi)) {
  if (!phi.contracting()) throw std::invalid_argument("unstable graph: needs beta < 1");
  const double rate = phi.beta() * std::pow(phi.nu(), phi.alpha());
  depth_ = depth ? *depth : std::min(default_lamination_depth(phi.holder(), rate), phi.depth() + 1);
  x_ = x ? *x : evaluate_graph(phi, xi_, default_graph_depth(phi, 1e-15)).value;
}

double UnstableGraph::holder_constant() const {
  return phi_.holder() / (1 - phi_.beta() * std::pow(phi_.nu(), phi_.alpha()));
}

double UnstableGraph::tail(int n, double d_alpha) const {
  const double r = phi_.beta() * std::pow(phi_.nu(), phi_.alpha());
  return phi_.holder() * std::pow(r, n + 1) / (1 - r) * d_alpha;
}

LeafValue UnstableGraph::eval(const BiSequence& xi_prime) const { return eval(xi_prime, depth_); }

LeafValue UnstableGraph::eval(const BiSequence& xi_prime, int n) const {
  if (!in_local_unstable(xi_, xi_prime)) throw std::invalid_argument("unstable graph: point is not in the local unstable set");
  double da = std::pow(metric(xi_, xi_prime, phi_.nu()), phi_.alpha());
  return {unstable_iterate(phi_, xi_, xi_prime, x_, n), tail(n, da), n};
}

StableGraph::StableGraph(const SkewProduct& phi, BiSequence xi, Vec x, std::optional<int> depth)
    : phi_(phi), dual_(inverse_skew_product(phi)), xi_(std::move(xi)), x_(std::move(x)) {
  if (!phi.constants().s_domination()) throw std::invalid_argument("stable graph: needs nu^alpha < lambda");
  const double rate = std::pow(phi.nu(), phi.alpha()) / phi.lambda();
  // Deeper compositions only amplify roundoff by λ^{−n}.
  depth_ = depth ? *depth : std::min(default_lamination_depth(phi.holder(), rate), phi.depth() + 1);
}

double StableGraph::holder_constant() const {
  return phi_.holder() / (1 - std::pow(phi_.nu(), phi_.alpha()) / phi_.lambda());
}

double StableGraph::tail(int n, double d_alpha) const {
  const double r = std::pow(phi_.nu(), phi_.alpha()) / phi_.lambda();
  return phi_.holder() * std::pow(r, n + 1) / (1 - r) * d_alpha;
}

LeafValue StableGraph::eval(const BiSequence& xi_prime) const { return eval(xi_prime, depth_); }

LeafValue StableGraph::eval(const BiSequence& xi_prime, int n) const {
  if (!in_local_stable(xi_, xi_prime)) throw std::invalid_argument("stable graph: point is not in the local stable set");
  // Forward iterates of Φ along ξ are backward iterates of Φ* along (τ^{−1}ξ)*.
  BiSequence b = xi_.shift(-1).conjugate(), bp = xi_prime.shift(-1).conjugate();
  double da = std::pow(metric(xi_, xi_prime, phi_.nu()), phi_.alpha());
  return {unstable_iterate(dual_, b, bp, x_, n), tail(n, da), n};
}

InvarianceReport invariance_check(const SkewProduct& phi, const UnstableGraph& g, int samples, std::uint64_t seed) {
  InvarianceReport rep;
  rep.samples = samples;
  Rng rng(seed);
  const int n = g.depth();
  const BiSequence& xi = g.base();
  const BiSequence back = xi.shift(-1);
  const Vec xb = phi.at(xi, -1).inverse_apply(g.point());
  UnstableGraph prev(phi, back, xb, n);
  for (int s = 0; s < samples; ++s) {
    BiSequence xp = xi.with_future_word(rng.word(phi.k(), rng.integer(1, 8)));
    Vec lhs = phi.at(xp, -1).inverse_apply(g.eval(xp, n).value);
    Vec rhs = prev.eval(xp.shift(-1), n).value;
    rep.max_residual = std::max(rep.max_residual, sup_dist(lhs, rhs));
  }
  const double r = phi.beta() * std::pow(phi.nu(), phi.alpha());
  rep.allowed = phi.holder() * std::pow(r, n) / (1 - r) + 1e-9;
  return rep;
}

InvarianceReport invariance_check(const SkewProduct& phi, const StableGraph& g, int samples, std::uint64_t seed) {
  InvarianceReport rep;
  rep.samples = samples;
  Rng rng(seed);
  const int n = g.depth();
  const BiSequence& xi = g.base();
  StableGraph next(phi, xi.shift(1), phi.at(xi, 0)(g.point()), n);
  for (int s = 0; s < samples; ++s) {
    BiSequence xp = xi.with_past_word(rng.word(phi.k(), rng.integer(1, 8)));
    Vec lhs = phi.at(xp, 0)(g.eval(xp, n).value);
    Vec rhs = next.eval(xp.shift(1), n).value;
    rep.max_residual = std::max(rep.max_residual, sup_dist(lhs, rhs));
  }
  const double r = std::pow(phi.nu(), phi.alpha()) / phi.lambda();
  rep.allowed = phi.holder() * std::pow(r, n) / (1 - r) + 1e-9;
  return rep;
}

}  // namespace symblend
