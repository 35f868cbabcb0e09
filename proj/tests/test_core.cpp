#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vck/learner.hpp"
#include "vck/measure.hpp"
#include "vck/relation.hpp"
#include "vck/rng.hpp"

using namespace vck;

namespace {

Relation rel(const ProductDomain& d, std::initializer_list<Point> pts) {
  return Relation::of_points(d, std::vector<Point>(pts));
}

}  // namespace

TEST_CASE("domain indexing is row-major with axis 0 slowest") {
  ProductDomain d({2, 3});
  CHECK(d.total() == 6);
  CHECK(d.flatten({0, 0}) == 0);
  CHECK(d.flatten({0, 2}) == 2);
  CHECK(d.flatten({1, 0}) == 3);
  CHECK(d.unflatten(5) == Point{1, 2});
  CHECK_THROWS_AS(ProductDomain({0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(ProductDomain(std::vector<Index>{}), std::invalid_argument);
}

TEST_CASE("cylinder over the fiber of a full relation is full") {
  ProductDomain d({2, 2});
  Relation full = Relation::full_on(d);
  FiberSpec f{&full, {0}, {0}};
  CHECK(cylinder_expand(f, d) == full);
}

TEST_CASE("cylinder over an empty fiber is empty") {
  ProductDomain d({2, 2});
  Relation s = rel(d, {{0, 0}});
  FiberSpec f{&s, {1}, {1}};  // column fiber at x2=1 of {(0,0)} is empty
  CHECK(cylinder_expand(f, d).none());
}

TEST_CASE("cylinder over a column fiber enumerates by hand") {
  // S = {(0,0),(1,1)} on 2x2, fix axis 0 to value 1: fiber {1}, cylinder
  // {(0,1),(1,1)}.
  ProductDomain d({2, 2});
  Relation s = rel(d, {{0, 0}, {1, 1}});
  FiberSpec f{&s, {0}, {1}};
  CHECK(cylinder_expand(f, d) == rel(d, {{0, 1}, {1, 1}}));
}

TEST_CASE("fiber errors") {
  ProductDomain d({2, 2});
  Relation s = Relation::full_on(d);
  FiberSpec bad_axis{&s, {2}, {0}};
  CHECK_THROWS_AS(cylinder_expand(bad_axis, d), std::out_of_range);
  FiberSpec bad_value{&s, {0}, {5}};
  CHECK_THROWS_AS(cylinder_expand(bad_value, d), std::out_of_range);
  FiberSpec ok{&s, {0}, {0}};
  CHECK_THROWS_AS(cylinder_expand(ok, ProductDomain({3, 2})), std::invalid_argument);
}

TEST_CASE("re-slicing a cylinder recovers the fiber") {
  ProductDomain d({3, 4});
  Rng rng(7);
  for (int it = 0; it < 50; ++it) {
    Relation s(d);
    for (std::size_t i = 0; i < d.total(); ++i)
      if (rng.next() & 1) s.set(i);
    Index a = static_cast<Index>(rng.below(3));
    Relation fib = fiber_of(s, {0}, {a});
    Relation cyl = cylinder_expand(FiberSpec{&s, {0}, {a}}, d);
    CHECK(fiber_of(cyl, {0}, {a}) == fib);
    CHECK(fiber_of(cyl, {0}, {(a + 1) % 3}) == fib);  // cylinders are constant along u
  }
}

TEST_CASE("measure of full, empty and a point") {
  ProductDomain d({2, 2});
  ProductMeasure mu = ProductMeasure::uniform(d);
  CHECK(mu.measure(Relation::full_on(d)) == 1);
  CHECK(mu.measure(Relation::empty_on(d)) == 0);
  CHECK(mu.measure(rel(d, {{0, 0}})) == Rational(1, 4));
}

TEST_CASE("symdiff examples") {
  ProductDomain d({2, 2});
  ProductMeasure mu = ProductMeasure::uniform(d);
  Relation row = rel(d, {{0, 0}, {0, 1}});
  Relation col = rel(d, {{0, 0}, {1, 0}});
  CHECK(symdiff_measure(row, row, mu) == 0);
  CHECK(symdiff_measure(Relation::full_on(d), Relation::empty_on(d), mu) == 1);
  CHECK(symdiff_measure(row, col, mu) == Rational(1, 2));
}

TEST_CASE("measure is modular and symdiff a pseudometric") {
  ProductDomain d({3, 3});
  std::vector<std::vector<Rational>> axes{
      {Rational(1, 2), Rational(1, 3), Rational(1, 6)},
      {Rational(2, 5), Rational(2, 5), Rational(1, 5)}};
  ProductMeasure mu(d, axes);
  Rng rng(13);
  for (int it = 0; it < 40; ++it) {
    Relation a(d), b(d), c(d);
    for (std::size_t i = 0; i < d.total(); ++i) {
      if (rng.next() & 1) a.set(i);
      if (rng.next() & 1) b.set(i);
      if (rng.next() & 1) c.set(i);
    }
    CHECK(mu.measure(a | b) + mu.measure(a & b) == mu.measure(a) + mu.measure(b));
    CHECK(mu.symdiff(a, b) == mu.symdiff(b, a));
    CHECK(mu.symdiff(a, c) <= mu.symdiff(a, b) + mu.symdiff(b, c));
    // strictly positive weights: distance zero iff equal
    if (a != b) CHECK(mu.symdiff(a, b) > 0);
  }
}

TEST_CASE("axis weights must sum to one exactly") {
  ProductDomain d({2});
  CHECK_THROWS_AS(ProductMeasure(d, {{Rational(1, 2), Rational(1, 3)}}), std::invalid_argument);
  CHECK_THROWS_AS(ProductMeasure(d, {{Rational(3, 2), Rational(-1, 2)}}), std::invalid_argument);
}

TEST_CASE("sampling follows the axis law deterministically") {
  ProductDomain d({4});
  ProductMeasure mu(d, {{Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 8)}});
  Rng rng(99);
  std::vector<int> counts(4, 0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(mu.sample_axis(0, rng.next()))];
  CHECK(std::abs(counts[0] - n / 2) < 2000);
  CHECK(std::abs(counts[1] - n / 4) < 2000);
  CHECK(std::abs(counts[2] - n / 8) < 1500);
  // determinism: same seed, same stream
  Rng r1(5), r2(5);
  for (int i = 0; i < 100; ++i) CHECK(mu.sample_axis(0, r1.next()) == mu.sample_axis(0, r2.next()));
}

TEST_CASE("dn_set unions the axis hyperplanes") {
  ProductDomain d22({2, 2});
  auto s = dn_set(d22, {0, 0});
  CHECK(s == std::vector<std::size_t>{d22.flatten({0, 0}), d22.flatten({0, 1}),
                                      d22.flatten({1, 0})});

  ProductDomain d1({5});
  CHECK(dn_set(d1, {3}) == std::vector<std::size_t>{3});

  ProductDomain d33({3, 3});
  CHECK(dn_set(d33, {1, 1}).size() == 5);

  // |D_n(a)| = prod(n_i) - prod(n_i - 1)
  ProductDomain d({3, 4, 2});
  CHECK(dn_set(d, {2, 1, 0}).size() == 3 * 4 * 2 - 2 * 3 * 1);
}

TEST_CASE("restrict labels exactly the window") {
  ProductDomain d({3, 3});
  Relation diag = rel(d, {{0, 0}, {1, 1}, {2, 2}});
  SampleSlices s = restrict_concept(diag, {0, 0});
  CHECK(s.label(d.flatten({0, 0})));
  CHECK_FALSE(s.label(d.flatten({0, 1})));
  CHECK_FALSE(s.label(d.flatten({2, 0})));
  CHECK_THROWS_AS(s.label(d.flatten({1, 1})), std::out_of_range);  // off the window

  Relation full_rel = Relation::full_on(d);
  SampleSlices f = restrict_concept(full_rel, {1, 2});
  for (std::size_t c : dn_set(d, {1, 2})) CHECK(f.label(c));
  Relation empty_rel = Relation::empty_on(d);
  SampleSlices e = restrict_concept(empty_rel, {1, 2});
  for (std::size_t c : dn_set(d, {1, 2})) CHECK_FALSE(e.label(c));
}
