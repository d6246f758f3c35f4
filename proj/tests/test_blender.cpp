#include <doctest.h>

#include <cmath>

#include "symblend/blender.hpp"
#include "symblend/rng.hpp"

using namespace symblend;

namespace {

const Box kB = Box::interval(0, 1);

SkewProduct covering_pair() {
  return SkewProduct::one_step({FiberMap::affine(vec({0.6}), vec({-0.05})), FiberMap::affine(vec({0.6}), vec({0.45}))},
                               Box::interval(-0.5, 1.5));
}

// λ = ν^α: domination fails before covering is looked at.
SkewProduct affine_halves() {
  return SkewProduct::one_step({FiberMap::affine(vec({0.5}), vec({0})), FiberMap::affine(vec({0.5}), vec({0.5}))}, Box::interval(0, 1));
}

bool contains_word(const BruteForceResult& bf, const Word& w) {
  return std::find(bf.admissible.begin(), bf.admissible.end(), w) != bf.admissible.end();
}

}  // namespace

TEST_SUITE("blender") {

TEST_CASE("members and Lebesgue bound of the covering pair") {
  auto setup = intersection_setup(covering_pair(), kB, 0.0);
  REQUIRE(setup.members.size() == 2);
  CHECK(setup.members[0].lo(0) == doctest::Approx(-0.05));
  CHECK(setup.members[0].hi(0) == doctest::Approx(0.55));
  CHECK(setup.members[1].lo(0) == doctest::Approx(0.45));
  CHECK(setup.L >= 0.09);
  CHECK(setup.L <= 0.1 + 1e-12);
  auto deflated = blender_members(covering_pair(), kB, 0.01);
  CHECK(deflated[0].hi(0) == doctest::Approx(0.54));
}

TEST_CASE("flat disk is hit by the backward orbit") {
  auto phi = covering_pair();
  auto setup = intersection_setup(phi, kB, 0.0);
  BiSequence zeta = BiSequence::constant(1);
  auto H = HorizontalDisk::flat(zeta, vec({0.3}), 0.02);
  auto r = disk_intersect(phi, setup, H, 30);
  REQUIRE(r.success);
  CHECK(r.diameter_laws);
  CHECK(r.word.size() == 30);
  CHECK(in_local_stable(zeta, r.xi));
  CHECK(sup_dist(r.x, H(r.xi)) == 0);
  CHECK(r.min_margin > 0);
  CHECK(backward_margin(phi, r.xi, r.x, kB, 30) == doctest::Approx(r.min_margin));
  for (const auto& y : backward_orbit(phi, r.xi, r.x, 30)) CHECK(kB.contains_open(y));
  for (const auto& st : r.steps) CHECK(st.a_diameter < setup.L);
}

TEST_CASE("disk outside B is rejected") {
  auto phi = covering_pair();
  auto setup = intersection_setup(phi, kB, 0.0);
  auto r = disk_intersect(phi, setup, HorizontalDisk::flat(BiSequence::constant(2), vec({1.3}), 0.02), 10);
  CHECK_FALSE(r.success);
  CHECK_FALSE(brute_force_words(phi, kB, HorizontalDisk::flat(BiSequence::constant(2), vec({1.3}), 0.02), 10).any());
}

TEST_CASE("agrees with exhaustive search on small instances") {
  auto phi = covering_pair();
  auto setup = intersection_setup(phi, kB, 0.0);
  Rng rng(51);
  for (int i = 0; i < 16; ++i) {
    int N = 4 + i % 6;
    HorizontalDisk h = i < 4 ? HorizontalDisk::flat(rng.sequence(2), vec({i % 2 ? -0.2 : 1.3}), 0.02)
                             : random_disk(i % 2 ? DiskKind::Flat : DiskKind::Tilted, kB, 2, 1, 0.026, 1, 0.5, rng);
    auto res = disk_intersect(phi, setup, h, N);
    auto bf = brute_force_words(phi, kB, h, N);
    CHECK(res.success == bf.any());
    if (res.success) CHECK(contains_word(bf, res.word));
  }
}

TEST_CASE("preconditions are reported, not thrown") {
  // λ = 0.4 < ν^α = 0.5
  auto weak = SkewProduct::one_step({FiberMap::affine(vec({0.4}), vec({0})), FiberMap::affine(vec({0.4}), vec({0.6}))},
                                    Box::interval(-0.5, 1.5));
  auto setup = intersection_setup(weak, kB, 0.0);
  auto r = disk_intersect(weak, setup, HorizontalDisk::flat(BiSequence::constant(1), vec({0.5}), 0.01), 10);
  CHECK_FALSE(r.success);
  CHECK(r.failure.rfind("precondition:", 0) == 0);
  auto phi = covering_pair();
  auto good = intersection_setup(phi, kB, 0.0);
  auto wide = disk_intersect(phi, good, HorizontalDisk::flat(BiSequence::constant(1), vec({0.5}), 0.5), 10);
  CHECK(wide.failure.rfind("precondition:", 0) == 0);
}

TEST_CASE("disk validation") {
  Rng rng(52);
  auto ok = validate_disk(HorizontalDisk::flat(BiSequence::constant(1), vec({0.5}), 0.02), kB, 2, 32, rng);
  CHECK(ok.valid);
  CHECK(ok.measured_holder == 0);
  auto out = validate_disk(HorizontalDisk::flat(BiSequence::constant(1), vec({1.5}), 0.02), kB, 2, 32, rng);
  CHECK_FALSE(out.valid);
  auto t = random_disk(DiskKind::Tilted, kB, 2, 1, 0.02, 1, 0.5, rng);
  auto vt = validate_disk(t, kB, 2, 64, rng);
  CHECK(vt.valid);
  CHECK(vt.measured_holder <= t.C + 1e-12);
  CHECK(vt.max_offset < t.delta);
}

TEST_CASE("disk JSON round-trip and diagnostics") {
  Rng rng(53);
  auto t = random_disk(DiskKind::Random, kB, 2, 1, 0.02, 1, 0.5, rng);
  auto back = HorizontalDisk::from_json(t.to_json(), 1);
  for (int i = 0; i < 20; ++i) {
    BiSequence xi = t.zeta.with_past_word(rng.word(2, 8));
    CHECK(sup_dist(t(xi), back(xi)) < 1e-15);
  }
  Json bad = t.to_json();
  bad["kind"] = "wobbly";
  CHECK_THROWS_AS(HorizontalDisk::from_json(bad, 1), ParseError);
  Json wrongC = t.to_json();
  wrongC["C"] = t.C * 2 + 1;
  CHECK_THROWS_AS(HorizontalDisk::from_json(wrongC, 1), ParseError);
}

TEST_CASE("backward divergence stays under its bound") {
  auto phi = covering_pair();
  Rng rng(54);
  auto psi = random_translation(phi.lifted(1), 0.003, rng);
  double worst = 0;
  for (int s = 0; s < 300; ++s) {
    int i = rng.integer(1, 10), n = rng.integer(i, 12);
    double x = rng.uniform(0.1, 0.9);
    // a past word keeping x's backward orbit in B
    Word out;
    double y = x;
    for (int j = 0; j < n; ++j) {
      int sym = y < 0.5 ? 1 : 2;
      out.push_back(sym);
      y = sym == 1 ? (y + 0.05) / 0.6 : (y - 0.45) / 0.6;
    }
    Word w = reversed(out), fut = rng.word(2, n + 1);
    w.insert(w.end(), fut.begin(), fut.end());
    Cylinder cyl{w, -n};
    auto a = rng.sequence(2).with_word(-n, w), b = rng.sequence(2).with_word(-n, w);
    try {
      worst = std::max(worst, measure_backward_divergence(psi, cyl, vec({x}), i, a, b).ratio());
    } catch (const DomainEscape&) {
    }
  }
  CHECK(worst <= 1);
}

TEST_CASE("certificate on the covering pair") {
  BlenderConfig cfg;
  cfg.disks = 6;
  cfg.perturbations = 2;
  auto cert = certify_blender(covering_pair(), kB, cfg);
  CHECK(cert.passed);
  CHECK(cert.failed_stage.empty());
  CHECK(cert.delta_max > 0);
  CHECK(cert.neighbourhood_radius > 0);
  CHECK(cert.neighbourhood_radius <= cfg.budget);
  CHECK(cert.tested.size() == static_cast<std::size_t>((cfg.perturbations + 1) * (cfg.disks + 2)));
  for (const auto& td : cert.tested) CHECK(td.result.success);
  CHECK(certify_blender(covering_pair(), kB, cfg).to_json().dump() == cert.to_json().dump());
}

TEST_CASE("certificate failures name their stage") {
  // Images (0, 0.6) and (0.4, 1) miss the end points of B̄.
  auto open_ends = SkewProduct::one_step({FiberMap::affine(vec({0.6}), vec({0})), FiberMap::affine(vec({0.6}), vec({0.4}))},
                                         Box::interval(-0.5, 1.5));
  BlenderConfig cfg;
  cfg.disks = 2;
  auto c0 = certify_blender(affine_halves(), kB, cfg);
  CHECK(c0.failed_stage == "preconditions");
  auto c1 = certify_blender(open_ends, kB, cfg);
  CHECK_FALSE(c1.passed);
  CHECK(c1.failed_stage == "covering");
  auto c2 = certify_cu_blender(covering_pair(), kB, cfg);
  CHECK(c2.failed_stage == "preconditions");
  auto c3 = certify_cu_blender(inverse_skew_product(covering_pair()), kB, cfg);
  CHECK(c3.passed);
  CHECK(c3.cu);
}

}
