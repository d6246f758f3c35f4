#include <doctest.h>

#include "symblend/geometry.hpp"
#include "symblend/rng.hpp"

using namespace symblend;

TEST_SUITE("geometry") {

TEST_CASE("box predicates") {
  Box a = Box::interval(0, 1);
  CHECK(a.contains_open(vec({0.5})));
  CHECK_FALSE(a.contains_open(vec({1.0})));
  CHECK(a.contains_closed(vec({1.0})));
  CHECK(Box::interval(0.2, 0.3).inside_open(a));
  CHECK_FALSE(Box::interval(0, 0.3).inside_open(a));
  CHECK(Box::interval(0, 0.3).inside_closed(a));
  CHECK(a.point_depth(vec({0.25})) == doctest::Approx(0.25));
  CHECK(a.point_depth(vec({1.5})) < 0);
  CHECK(Box::interval(0.2, 0.3).depth_in(a) == doctest::Approx(0.2));
  auto i = a.intersect(Box::interval(0.5, 2));
  REQUIRE(i);
  CHECK(*i == Box::interval(0.5, 1));
  CHECK_FALSE(a.intersect(Box::interval(2, 3)));
}

TEST_CASE("sup norm in several dimensions") {
  Box c = Box::cube(vec({0, 0, 0}), 1);
  CHECK(c.max_side() == 2);
  CHECK(c.vertices().size() == 8);
  CHECK(c.point_depth(vec({0.5, -0.9, 0})) == doctest::Approx(0.1));
  CHECK(sup_dist(vec({1, 2}), vec({0, 5})) == 3);
}

TEST_CASE("union containment") {
  std::vector<Box> cover{Box::interval(-0.1, 0.6), Box::interval(0.5, 1.1)};
  auto ok = certify_inside_union(Box::interval(0, 1), cover, 10);
  CHECK(ok.status == Containment::Certified);
  std::vector<Box> gap{Box::interval(-0.1, 0.5), Box::interval(0.5, 1.1)};
  auto no = certify_inside_union(Box::interval(0, 1), gap, 10);
  CHECK(no.status == Containment::Refuted);
  REQUIRE(no.witness);
  CHECK((*no.witness)(0) == doctest::Approx(0.5));
}

TEST_CASE("hausdorff distance of intervals") {
  BoxSet a({Box::interval(0, 1)}, 10), b({Box::interval(0, 0.5)}, 10);
  CHECK(hausdorff(a, b) == doctest::Approx(0.5).epsilon(0.01));
  CHECK(directed_hausdorff(b, a) <= std::ldexp(1.0, -16));
  BoxSet c({Box::interval(0, 0.25), Box::interval(0.75, 1)}, 10);
  CHECK(hausdorff(a, c) == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("box sets round-trip through csv") {
  BoxSet a({Box::interval(0, 0.25), Box::interval(0.5, 0.75)}, 8);
  BoxSet b = BoxSet::from_csv(a.to_csv(), 8);
  CHECK(hausdorff(a, b) == 0);
  CHECK(b.contains(vec({0.6})));
  CHECK_FALSE(b.contains(vec({0.4})));
}

}
