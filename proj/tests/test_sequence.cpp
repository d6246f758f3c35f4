#include <doctest.h>

#include <cmath>

#include "symblend/rng.hpp"
#include "symblend/sequence.hpp"

using namespace symblend;

TEST_SUITE("sequence") {

TEST_CASE("indexing follows the past/future words") {
  BiSequence s({3, 1}, {2}, {1, 2}, {3});
  CHECK(s[-1] == 1);
  CHECK(s[-2] == 3);
  CHECK(s[-3] == 2);
  CHECK(s[-50] == 2);
  CHECK(s[0] == 1);
  CHECK(s[1] == 2);
  CHECK(s[7] == 3);
}

TEST_CASE("shift moves every index by n") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    BiSequence s = rng.sequence(3);
    long n = rng.integer(-9, 9);
    BiSequence u = s.shift(n);
    for (long i = -20; i <= 20; ++i) REQUIRE(u[i] == s[i + n]);
  }
}

TEST_CASE("shifts compose and invert") {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    BiSequence s = rng.sequence(4);
    long a = rng.integer(-6, 6), b = rng.integer(-6, 6);
    CHECK(s.shift(a).shift(b) == s.shift(a + b));
    CHECK(s.shift(a).shift(-a) == s);
  }
}

TEST_CASE("text form round-trips") {
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    BiSequence s = rng.sequence(5);
    CHECK(BiSequence::parse(s.str()) == s);
  }
  CHECK_THROWS(BiSequence::parse("(1|2)"));
  CHECK_THROWS(BiSequence::parse("(1|);(|2)"));
}

TEST_CASE("word replacement touches only the requested indices") {
  Rng rng(14);
  BiSequence s = rng.sequence(3);
  Word w{3, 2, 1};
  BiSequence p = s.with_past_word(w);
  CHECK(p[-3] == 3);
  CHECK(p[-2] == 2);
  CHECK(p[-1] == 1);
  for (long i = 0; i < 10; ++i) CHECK(p[i] == s[i]);
  for (long i = -20; i < -3; ++i) CHECK(p[i] == s[i]);
  BiSequence q = s.with_word(2, {1, 1});
  CHECK(q[2] == 1);
  CHECK(q[3] == 1);
  CHECK(q[1] == s[1]);
  CHECK(q.segment(-1, 4).size() == 6);
}

TEST_CASE("metric is nu to the first disagreement") {
  const double nu = 0.5;
  BiSequence a = BiSequence::constant(1);
  for (long l = 0; l < 10; ++l) {
    BiSequence f = a.with_word(l, {2});
    BiSequence p = a.with_word(-l, {2});
    CHECK(metric(a, f, nu) == doctest::Approx(std::pow(nu, static_cast<double>(l))));
    CHECK(metric(a, p, nu) == doctest::Approx(std::pow(nu, static_cast<double>(l))));
  }
  CHECK(metric(a, a, nu) == 0);
  CHECK_FALSE(first_disagreement(a, a).has_value());
}

TEST_CASE("metric is an ultrametric") {
  Rng rng(15);
  for (int t = 0; t < 300; ++t) {
    BiSequence x = rng.sequence(2, 4, 2), y = rng.sequence(2, 4, 2), z = rng.sequence(2, 4, 2);
    CHECK(metric(x, z, 0.5) <= std::max(metric(x, y, 0.5), metric(y, z, 0.5)) + 1e-15);
    CHECK(metric(x, y, 0.5) == metric(y, x, 0.5));
  }
}

TEST_CASE("cylinders and word enumeration") {
  Cylinder c{{1, 2}, -1};
  BiSequence s = BiSequence::constant(3).with_word(-1, {1, 2});
  CHECK(c.contains(s));
  CHECK_FALSE(c.contains(s.shift(1)));
  auto words = all_words(3, 4);
  CHECK(words.size() == 81);
  CHECK(words.front() == Word{1, 1, 1, 1});
  CHECK(words.back() == Word{3, 3, 3, 3});
  CHECK(std::is_sorted(words.begin(), words.end()));
  CHECK(parse_word(word_str({4, 1, 2})) == Word{4, 1, 2});
}

TEST_CASE("local stable and unstable sets") {
  BiSequence xi = BiSequence::constant(1);
  for (const auto& r : local_stable_reps(xi, 2, 3)) CHECK(in_local_stable(xi, r));
  for (const auto& r : local_unstable_reps(xi, 2, 3)) CHECK(in_local_unstable(xi, r));
  CHECK_FALSE(in_local_stable(xi, xi.with_word(4, {2})));
  CHECK(in_local_stable(xi, xi.with_word(-4, {2})));
}

}
