#include <doctest.h>

#include <cmath>

#include "symblend/invariant_graph.hpp"
#include "symblend/lamination.hpp"
#include "symblend/rng.hpp"

using namespace symblend;

namespace {

SkewProduct covering_pair() {
  return SkewProduct::one_step({FiberMap::affine(vec({0.6}), vec({-0.05})), FiberMap::affine(vec({0.6}), vec({0.45}))},
                               Box::interval(-0.5, 1.5));
}

// Entries depend on ξ_{−2}..ξ_2, so leaves are genuinely curved.
SkewProduct depth_two(std::uint64_t seed, double t = 0.003) {
  Rng rng(seed);
  return random_translation(covering_pair().lifted(2), t, rng);
}

}  // namespace

TEST_SUITE("lamination") {

TEST_CASE("one-step leaves are flat") {
  auto phi = covering_pair();
  Rng rng(31);
  BiSequence xi = rng.sequence(2);
  UnstableGraph u(phi, xi);
  StableGraph s(phi, xi, vec({0.4}));
  for (int t = 0; t < 50; ++t) {
    CHECK(sup_dist(u.eval(xi.with_future_word(rng.word(2, 5))).value, u.point()) < 1e-12);
    CHECK(sup_dist(s.eval(xi.with_past_word(rng.word(2, 5))).value, vec({0.4})) < 1e-12);
  }
}

TEST_CASE("leaves pass through their base point") {
  auto psi = depth_two(32);
  Rng rng(33);
  for (int t = 0; t < 20; ++t) {
    BiSequence xi = rng.sequence(2);
    UnstableGraph u(psi, xi);
    CHECK(sup_dist(u.eval(xi).value, u.point()) < 1e-12);
    CHECK(sup_dist(u.point(), evaluate_graph(psi, xi).value) < 1e-9);
    StableGraph s(psi, xi, vec({0.3}));
    CHECK(sup_dist(s.eval(xi).value, vec({0.3})) < 1e-12);
  }
}

TEST_CASE("unstable iterates converge at the stated rate") {
  auto psi = depth_two(34);
  const double r = psi.beta() * std::pow(psi.nu(), psi.alpha());
  Rng rng(35);
  double worst = 0;
  for (int t = 0; t < 300; ++t) {
    BiSequence xi = rng.sequence(2);
    BiSequence xp = xi.with_future_word(rng.word(2, rng.integer(1, 4)));
    Vec x = evaluate_graph(psi, xi).value;
    double da = std::pow(metric(xi, xp, psi.nu()), psi.alpha());
    for (int n = 0; n <= 15; ++n) {
      double step = sup_dist(unstable_iterate(psi, xi, xp, x, n + 1), unstable_iterate(psi, xi, xp, x, n));
      double allowed = psi.holder() * std::pow(r, n + 1) * da;
      worst = std::max(worst, step / allowed);
      REQUIRE(step <= allowed * (1 + 1e-9) + 1e-15);
    }
  }
  CHECK(worst > 0);
}

TEST_CASE("unstable leaves are Hölder with the stated constant") {
  auto psi = depth_two(36);
  Rng rng(37);
  BiSequence xi = rng.sequence(2);
  UnstableGraph u(psi, xi);
  double q = 0;
  for (int t = 0; t < 300; ++t) {
    BiSequence a = xi.with_future_word(rng.word(2, 6)), b = xi.with_future_word(rng.word(2, 6));
    if (a == b) continue;
    double d = std::pow(metric(a, b, psi.nu()), psi.alpha());
    q = std::max(q, sup_dist(u.eval(a).value, u.eval(b).value) / d);
  }
  CHECK(q > 0);
  CHECK(q <= u.holder_constant() + 1e-6);
}

TEST_CASE("leaves are invariant") {
  auto psi = depth_two(38);
  Rng rng(39);
  BiSequence xi = rng.sequence(2);
  UnstableGraph u(psi, xi);
  auto ru = invariance_check(psi, u, 300, 40);
  CHECK(ru.passed());
  StableGraph s(psi, xi, vec({0.4}));
  auto rs = invariance_check(psi, s, 300, 41);
  CHECK(rs.passed());
}

TEST_CASE("stable leaves: dual route agrees with direct composition") {
  auto psi = depth_two(42);
  Rng rng(43);
  BiSequence xi = rng.sequence(2);
  StableGraph s(psi, xi, vec({0.4}));
  for (int t = 0; t < 200; ++t) {
    BiSequence xp = xi.with_past_word(rng.word(2, rng.integer(1, 6)));
    int n = rng.integer(1, 15);
    CHECK(sup_dist(s.eval(xp, n).value, stable_iterate_direct(psi, xi, xp, vec({0.4}), n)) < 1e-9);
  }
}

TEST_CASE("stable leaves need s-domination") {
  // λ = 0.4 < ν^α = 0.5
  auto phi = SkewProduct::one_step({FiberMap::affine(vec({0.4}), vec({0})), FiberMap::affine(vec({0.4}), vec({0.6}))},
                                   Box::interval(-0.5, 1.5));
  CHECK_THROWS_AS(StableGraph(phi, BiSequence::constant(1), vec({0.2})), std::invalid_argument);
}

TEST_CASE("default depth reaches the requested tail") {
  int n = default_lamination_depth(1.0, 0.5, 1e-8);
  CHECK(std::pow(0.5, n) / 0.5 < 1e-8);
  CHECK(std::pow(0.5, n - 1) / 0.5 >= 1e-8);
  CHECK(default_lamination_depth(0.0, 0.5) == 1);
}

}
