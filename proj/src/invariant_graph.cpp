#include "symblend/invariant_graph.hpp"

#include <algorithm>
#include <cmath>

#include "symblend/ifs.hpp"
#include "symblend/rng.hpp"

namespace symblend {

namespace {

void require_contracting(const SkewProduct& phi, const char* who) {
  if (!phi.contracting()) throw std::invalid_argument(std::string(who) + ": needs a fiber-contracting skew product (beta < 1)");
}

bool primitive(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    bool rep = true;
    for (std::size_t j = d; j < n && rep; ++j) rep = w[j] == w[j - d];
    if (rep) return false;
  }
  return true;
}

}  // namespace

GraphValue evaluate_graph(const SkewProduct& phi, const BiSequence& xi, int N) {
  require_contracting(phi, "evaluate_graph");
  Vec x = phi.D().center();
  for (long j = -N; j <= -1; ++j) x = phi.at(xi, j)(x);
  return {x, std::pow(phi.beta(), N) * phi.D().max_side()};
}

int default_graph_depth(const SkewProduct& phi, double tol) {
  require_contracting(phi, "default_graph_depth");
  if (phi.beta() == 0) return 1;
  double n = std::log(tol / phi.D().max_side()) / std::log(phi.beta());
  return std::max(1, static_cast<int>(std::ceil(n)));
}

std::vector<PeriodicPoint> periodic_points(const SkewProduct& phi, int max_period) {
  require_contracting(phi, "periodic_points");
  std::vector<PeriodicPoint> out;
  for (int n = 1; n <= max_period; ++n) {
    for (const auto& w : all_words(phi.k(), n)) {
      if (!primitive(w)) continue;
      PeriodicPoint pp;
      pp.period = w;
      pp.theta = BiSequence::periodic(w);
      Vec x = phi.D().center();
      for (int it = 0; it < 100000; ++it) {
        Vec y = compose_forward(phi, pp.theta, x, n, false);
        double step = sup_dist(x, y);
        x = y;
        if (step < 1e-14) break;
      }
      pp.p = x;
      pp.residual = sup_dist(compose_forward(phi, pp.theta, x, n, false), x);
      pp.multiplier = std::pow(phi.beta(), n);
      out.push_back(std::move(pp));
    }
  }
  return out;
}

GraphImage graph_image(const SkewProduct& phi, int depth, int N, int resolution) {
  require_contracting(phi, "graph_image");
  const double beta = phi.beta(), diam = phi.D().max_side();
  const int n_eval = std::max(N, depth);
  double e = std::pow(beta, depth) * diam + std::pow(beta, n_eval) * diam;
  if (phi.holder() > 0) {
    const double na = std::pow(phi.nu(), phi.alpha());
    for (int j = 1; j <= depth; ++j) e += std::pow(beta, j - 1) * phi.holder() * std::pow(na, std::min(j, depth + 1 - j));
  }
  std::vector<Box> boxes;
  const BiSequence base = BiSequence::constant(1);
  for (const auto& w : all_words(phi.k(), depth)) {
    Vec g = evaluate_graph(phi, base.with_past_word(w), n_eval).value;
    boxes.push_back(Box::cube(g, e));
  }
  GraphImage gi;
  gi.set = BoxSet(std::move(boxes), resolution);
  gi.pointwise_error = e;
  gi.tolerance = 2 * e;
  gi.depth = depth;
  gi.N = n_eval;
  return gi;
}

ContinuityReport continuity_probe(const SkewProduct& phi, double t, int trials, std::uint64_t seed, int resolution) {
  require_contracting(phi, "continuity_probe");
  ContinuityReport rep;
  rep.budget = t;
  rep.trials = trials;
  const double tol = std::ldexp(1.0, -(resolution + 2));
  const double cell = std::ldexp(1.0, -resolution);
  auto attractor = [&](const SkewProduct& s) -> std::pair<BoxSet, double> {
    if (s.depth() == 0) {
      auto r = hutchinson_attractor(IFS::of(s), tol, resolution);
      return {r.set, r.error_bound};
    }
    auto g = graph_image(s, std::min(12, default_graph_depth(s, tol)), 60, resolution);
    return {g.set, g.tolerance};
  };
  auto [K, errK] = attractor(phi);
  Rng rng(seed);
  double worst_err = 0;
  for (int i = 0; i < trials; ++i) {
    SkewProduct psi = random_translation(phi, t, rng);
    auto [L, errL] = attractor(psi);
    rep.max_distance = std::max(rep.max_distance, hausdorff(K, L));
    worst_err = std::max(worst_err, errL);
  }
  double beta = phi.beta();
  rep.bound = t / (1 - beta) + 2 * cell + errK + worst_err;
  return rep;
}

}  // namespace symblend
