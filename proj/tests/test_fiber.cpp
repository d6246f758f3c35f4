#include <doctest.h>

#include "symblend/fiber.hpp"
#include "symblend/rng.hpp"

using namespace symblend;

TEST_SUITE("fiber") {

TEST_CASE("affine maps invert") {
  auto f = FiberMap::affine(vec({0.6, 2.0}), vec({0.1, -1}));
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    Vec x = vec({rng.uniform(-2, 2), rng.uniform(-2, 2)});
    CHECK(sup_dist(f.inverse_apply(f(x)), x) < 1e-14);
    CHECK(sup_dist(f.inverse()(f(x)), x) < 1e-14);
  }
  auto [l, b] = f.lipschitz(Box::cube(vec({0, 0}), 1));
  CHECK(l == doctest::Approx(0.6));
  CHECK(b == doctest::Approx(2.0));
}

TEST_CASE("piecewise-linear slopes, images and inverses") {
  auto f = FiberMap::piecewise_linear({0, 1, 2}, {0, 2, 2.5});
  CHECK(f(vec({0.5}))(0) == doctest::Approx(1.0));
  CHECK(f(vec({3}))(0) == doctest::Approx(3.0));    // right extension, slope 0.5
  CHECK(f(vec({-1}))(0) == doctest::Approx(-2.0));  // left extension, slope 2
  auto [l, b] = f.lipschitz(Box::interval(0, 2));
  CHECK(l == doctest::Approx(0.5));
  CHECK(b == doctest::Approx(2.0));
  auto [l1, b1] = f.lipschitz(Box::interval(0.1, 0.9));
  CHECK(l1 == doctest::Approx(2.0));
  CHECK(b1 == doctest::Approx(2.0));
  Box im = f.image(Box::interval(0.5, 1.5));
  CHECK(im.lo(0) == doctest::Approx(1.0));
  CHECK(im.hi(0) == doctest::Approx(2.25));
  Box pre = f.preimage(im);
  CHECK(pre.lo(0) == doctest::Approx(0.5));
  CHECK(pre.hi(0) == doctest::Approx(1.5));
  for (double y = -3; y < 4; y += 0.37) CHECK(f(f.inverse_apply(vec({y})))(0) == doctest::Approx(y));
  CHECK_THROWS(FiberMap::piecewise_linear({0, 1}, {1, 0}));
}

TEST_CASE("perturbed maps stay close and monotone") {
  auto f = FiberMap::piecewise_linear({0, 0.1, 0.3, 0.7, 0.9, 1}, {0, 0.18, 0.38, 0.62, 0.82, 1});
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    auto g = perturb_map(f, 0.005, rng, true);
    CHECK(g.knots_y().front() == 0);
    CHECK(g.knots_y().back() == 1);
    for (std::size_t i = 0; i < g.knots_y().size(); ++i) {
      CHECK(std::abs(g.knots_y()[i] - f.knots_y()[i]) <= 0.005);
      if (i) CHECK(g.knots_y()[i] > g.knots_y()[i - 1]);
    }
    CHECK(f.c0_distance(g, Box::interval(0, 1)) <= 0.005);
  }
}

TEST_CASE("one-step skew products and their constants") {
  Box D = Box::interval(-0.5, 1.5);
  auto phi = SkewProduct::one_step({FiberMap::affine(vec({0.6}), vec({-0.05})), FiberMap::affine(vec({0.7}), vec({0.45}))}, D);
  CHECK(phi.lambda() == doctest::Approx(0.6));
  CHECK(phi.beta() == doctest::Approx(0.7));
  CHECK(phi.holder() == 0);
  CHECK(phi.contracting());
  CHECK(phi.regime_violations().empty());
  BiSequence xi = BiSequence::constant(1).with_word(0, {2});
  CHECK(phi.at(xi)(vec({0}))(0) == doctest::Approx(0.45));
  CHECK(phi.at(xi, 1)(vec({0}))(0) == doctest::Approx(-0.05));
}

TEST_CASE("lifting keeps the dynamics and translations measure their size") {
  Box D = Box::interval(-0.5, 1.5);
  auto phi = SkewProduct::one_step({FiberMap::affine(vec({0.6}), vec({-0.05})), FiberMap::affine(vec({0.6}), vec({0.45}))}, D);
  auto lift = phi.lifted(1);
  CHECK(lift.table().size() == 8);
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    BiSequence xi = rng.sequence(2);
    CHECK(lift.at(xi)(vec({0.3}))(0) == doctest::Approx(phi.at(xi)(vec({0.3}))(0)));
  }
  std::vector<Vec> shifts;
  for (std::size_t c = 0; c < lift.table().size(); ++c) shifts.push_back(vec({c == 3 ? 0.004 : 0.001}));
  auto psi = translate_entries(lift, shifts);
  // C0 distance of the entries plus the change in Hölder constant
  CHECK(skew_distance(lift, psi) == doctest::Approx(0.004 + psi.holder()));
  CHECK(psi.holder() > 0);
  auto inv = inverse_skew_product(phi);
  CHECK(inv.lambda() == doctest::Approx(1 / 0.6));
}

TEST_CASE("holder exponent") {
  CHECK(holder_exponent(0.5, 0.5) == doctest::Approx(1.0));
  CHECK(holder_exponent(0.25, 0.5) == doctest::Approx(0.5));
  CHECK_THROWS(holder_exponent(0.5, 0.25));
}

}
