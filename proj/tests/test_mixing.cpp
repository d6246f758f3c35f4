#include <doctest.h>

#include "symblend/rng.hpp"
#include "symblend/scenarios.hpp"

using namespace symblend;

namespace {

MixingConfig quick() {
  MixingConfig c;
  c.pairs = 15;
  c.perturbations = 2;
  return c;
}

// Independent replay of a witness: iterate x along ξ_0 … ξ_{n−1}.
bool witness_holds(const std::vector<FiberMap>& maps, const OpenPair& pair, const PairWitness& w) {
  Vec y = w.x;
  for (long i = 0; i < w.n; ++i) y = maps[static_cast<std::size_t>(w.xi[i] - 1)](y);
  return pair.u_box.contains_open(w.x) && pair.v_box.contains_open(y) && pair.u_cyl.contains(w.xi) &&
         pair.v_cyl.contains(w.xi.shift(w.n));
}

}  // namespace

TEST_SUITE("mixing") {

TEST_CASE("packaged scenario passes") {
  auto rep = verify_mixing(mixing_scenario_1d(), quick());
  CHECK(rep.passed());
  CHECK(rep.max_n0 <= 25);
  CHECK(rep.pairs.size() == 15);
  CHECK(rep.perturbations.size() == 3);
}

TEST_CASE("non-hyperbolicity marker records both fixed points") {
  auto rep = verify_mixing(mixing_scenario_1d(), quick());
  const Stage* s = rep.find("non-hyperbolicity");
  REQUIRE(s != nullptr);
  CHECK(s->passed);
  // φ_1 has slope 0.24/0.4 at p = 0.5; φ_4 has slope 5/3 at q = 0.55.
  CHECK(s->data["attracting"]["multiplier"]["value"].get<double>() == doctest::Approx(0.6));
  CHECK(s->data["repelling"]["multiplier"]["value"].get<double>() == doctest::Approx(5 / 3.0));
  CHECK(s->data["attracting"]["point"][0].get<double>() == doctest::Approx(0.5));
  CHECK(s->data["repelling"]["point"][0].get<double>() == doctest::Approx(0.55));
}

TEST_CASE("density checks") {
  auto s = mixing_scenario_1d();
  auto st = density_check(s.maps, s.window, 1, s.p, Direction::Stable, 4, 40);
  CHECK(st.passed());
  CHECK(st.cells == 16 * 16);
  auto un = density_check(s.maps, s.window, 4, s.q, Direction::Unstable, 4, 40);
  CHECK(un.passed());
  auto wrong = density_check(s.maps, s.window, 1, s.p, Direction::Unstable, 4, 40);
  CHECK(wrong.rejected);
  auto missing = density_check(s.maps, s.window, 9, s.p, Direction::Stable, 4, 40);
  CHECK(missing.rejected);
  auto short_h = density_check(s.maps, s.window, 1, s.p, Direction::Stable, 4, 1);
  CHECK_FALSE(short_h.passed());
}

TEST_CASE("every witness replays by direct iteration") {
  auto s = mixing_scenario_1d();
  Rng rng(61);
  auto pairs = random_pairs(s.d(), s.window, 40, rng);
  int found = 0;
  for (const auto& p : pairs) {
    for (int n = 1; n <= 40; n += 3) {
      auto w = mixing_witness(s.maps, s.k, s.B, p, n);
      if (!w) continue;
      ++found;
      CHECK(w->n == n);
      CHECK(w->margin > 0);
      CHECK(witness_holds(s.maps, p, *w));
    }
  }
  CHECK(found > 200);
}

TEST_CASE("a longer horizon never lowers n0") {
  auto s = mixing_scenario_1d();
  Rng rng(62);
  auto pairs = random_pairs(s.d(), s.window, 20, rng);
  auto n0 = [&](const OpenPair& p, int horizon) {
    int best = horizon + 1;
    for (int n = horizon; n >= 1 && mixing_witness(s.maps, s.k, s.B, p, n); --n) best = n;
    return best;
  };
  for (const auto& p : pairs) CHECK(n0(p, 30) <= n0(p, 40));
}

TEST_CASE("degenerate configurations fail loudly") {
  auto cfg = quick();
  cfg.horizon = 0;
  auto zero = verify_mixing(mixing_scenario_1d(), cfg);
  CHECK_FALSE(zero.passed());
  const Stage* pairs = zero.find("pairs");
  REQUIRE(pairs != nullptr);
  CHECK_FALSE(pairs->passed);
  CHECK(pairs->detail.find("horizon 0") != std::string::npos);
  auto s = mixing_scenario_1d();
  s.maps.pop_back();
  auto no_rep = verify_mixing(s, quick());
  CHECK(no_rep.failed_stage() == "density unstable");
  auto shifted = mixing_scenario_1d();
  shifted.p = vec({0.45});
  CHECK(verify_mixing(shifted, quick()).failed_stage() == "hypotheses");
}

TEST_CASE("blender activation from the repelling point") {
  auto s = mixing_scenario_1d();
  const std::vector<FiberMap> cover(s.maps.begin(), s.maps.begin() + s.k);
  IntersectionSetup setup = intersection_setup(SkewProduct::one_step(cover, s.D), s.B, 0.005, 0);
  BiSequence xi(Word{}, {4}, Word{1, 2}, {1});
  auto act = blender_activation(SkewProduct::one_step(s.maps, s.D), s.k, 4, s.q, xi, vec({0.2}), setup, 0.008, 1, 20, 30, 1);
  REQUIRE(act.passed());
  for (const auto& st : act.steps)
    if (st.success) CHECK(st.return_error < 1e-9);
  auto wrong_base = blender_activation(SkewProduct::one_step(s.maps, s.D), s.k, 4, s.q, BiSequence::constant(1), vec({0.2}),
                                       setup, 0.01, 1, 20, 30, 1);
  CHECK(wrong_base.rejected);
}

TEST_CASE("scenario JSON round-trips and the packaged file is current") {
  auto s = mixing_scenario_1d();
  CHECK(MixingScenario::from_json(s.to_json()).to_json() == s.to_json());
  CHECK(load_json(SYMBLEND_DATA_DIR "/mixing_1d.json") == s.to_json());
  Json bad = s.to_json();
  bad["k"] = "three";
  CHECK_THROWS_AS(MixingScenario::from_json(bad), ParseError);
}

}
