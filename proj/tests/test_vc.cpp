#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vck/vc.hpp"

using namespace vck;

TEST_CASE("shattering on tiny boxes") {
  // k=1: all 4 subsets of a 2-point line shatter the 2-box.
  SetFamily p2 = fixtures::powerset(ProductDomain({2}));
  Box both{{ {0, 1} }};
  CHECK(is_shattered(p2, both));
  CHECK(trace_count(p2, both) == 4);

  // {{0},{0,1}} misses the empty trace.
  ProductDomain line({2});
  Relation s0(line), s01(line);
  s0.set(0);
  s01.set(0);
  s01.set(1);
  SetFamily partial(line, {s0, s01});
  CHECK_FALSE(is_shattered(partial, both));
  CHECK(trace_count(partial, both) == 2);

  // powerset of 2x2 shatters its full box
  SetFamily p22 = fixtures::powerset(ProductDomain({2, 2}));
  Box full{{ {0, 1}, {0, 1} }};
  CHECK(is_shattered(p22, full));
  CHECK(trace_count(p22, full) == 16);
}

TEST_CASE("trace counts") {
  SetFamily one(ProductDomain({3, 3}), {fixtures::powerset(ProductDomain({3, 3})).members[17]});
  Box b{{ {0, 2}, {1, 2} }};
  CHECK(trace_count(one, b) == 1);

  SetFamily th = fixtures::thresholds(5);
  Box all5{{ {0, 1, 2, 3, 4} }};
  CHECK(trace_count(th, all5) == 6);
}

TEST_CASE("vck_dimension basics") {
  CHECK(vck_dimension(fixtures::powerset(ProductDomain({2, 2}))) == 2);
  CHECK(vck_dimension(fixtures::powerset(ProductDomain({3}))) == 3);

  SetFamily single(ProductDomain({3, 3}),
                   {Relation::full_on(ProductDomain({3, 3}))});
  CHECK(vck_dimension(single) == 0);

  CHECK(vck_dimension(fixtures::thresholds(5)) == 1);

  SetFamily empty_family(ProductDomain({2, 2}), {});
  CHECK_THROWS_AS(vck_dimension(empty_family), std::invalid_argument);
}

TEST_CASE("witness box is the first in enumeration order") {
  SetFamily p22 = fixtures::powerset(ProductDomain({2, 2}));
  auto res = vck_dimension_witness(p22);
  CHECK(res.dim == 2);
  REQUIRE(res.witness.has_value());
  CHECK(res.witness->axes == std::vector<std::vector<Index>>{{0, 1}, {0, 1}});
}

TEST_CASE("vck_of_relation slice families") {
  // full binary relation: one distinct slice, dimension 0
  ProductDomain d33({3, 3});
  CHECK(vck_of_relation(Relation::full_on(d33), 1) == 0);

  // equality relation: singleton slices, dimension 1
  Relation eq(d33);
  for (Index i = 0; i < 3; ++i) eq.set_point({i, i});
  CHECK(vck_of_relation(eq, 1) == 1);
  CHECK(slice_family(eq).size() == 3);

  // point-vs-subset membership relation encoding the powerset of [2]
  ProductDomain d24({2, 4});
  Relation membership(d24);
  for (Index b = 0; b < 4; ++b)
    for (Index x = 0; x < 2; ++x)
      if (b & (1 << x)) membership.set_point({x, b});
  CHECK(vck_of_relation(membership, 1) == 2);

  CHECK_THROWS_AS(vck_of_relation(Relation::full_on(d33), 2), std::invalid_argument);
}

TEST_CASE("budget refusal carries the verified lower bound") {
  VcOptions opt;
  opt.shatter_budget = 1ull << 4;  // refuse boxes past 16 subsets
  SetFamily p22 = fixtures::powerset(ProductDomain({2, 2}));
  // d=2 needs 2^4 = 16 <= 16, fine; on a 3x3 powerset d=3 needs 2^9.
  CHECK(vck_dimension(p22, opt) == 2);
  SetFamily p33 = fixtures::powerset(ProductDomain({3}));
  opt.shatter_budget = 1ull << 2;
  try {
    vck_dimension(p33, opt);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.lower_bound == 2);
  }
}

TEST_CASE("zarankiewicz closed form and exhaustive search") {
  for (int m = 1; m <= 10; ++m)
    for (int s = 1; s <= m; ++s) CHECK(zarankiewicz(1, m, s) == static_cast<std::uint64_t>(s));

  CHECK(zarankiewicz(2, 2, 2) == 4);
  CHECK(zarankiewicz(2, 3, 2) == 7);

  // independent recursion oracle
  CHECK(zarankiewicz(2, 2, 2) == oracle::naive_zarankiewicz(2, 2, 2));
  CHECK(zarankiewicz(2, 3, 2) == oracle::naive_zarankiewicz(2, 3, 2));
  CHECK(zarankiewicz(2, 3, 3) == oracle::naive_zarankiewicz(2, 3, 3));
  CHECK(zarankiewicz(3, 2, 2) == oracle::naive_zarankiewicz(3, 2, 2));

  // s > m: nothing to contain, z = m^k + 1
  CHECK(zarankiewicz(2, 2, 3) == 5);
}

TEST_CASE("sauer_shelah_check on thresholds and powerset") {
  // thresholds on [6], m=5, d=2: z=2, bound 1+5=6, all boxes pass
  SetFamily th = fixtures::thresholds(6);
  auto rows = sauer_shelah_check(th, 5, 2);
  CHECK(rows.size() == 6);  // C(6,5)
  for (const auto& r : rows) {
    CHECK(r.z == 2);
    CHECK(r.bound == 6);
    CHECK(r.traces <= 6);
    CHECK(r.pass);
    CHECK_FALSE(r.sampled);
  }

  // singleton family: one trace everywhere
  SetFamily single(th.domain, {th.members[3]});
  for (const auto& r : sauer_shelah_check(single, 4, 2)) {
    CHECK(r.traces == 1);
    CHECK(r.pass);
  }

  // powerset of 3x3 with claimed d=1 must fail: z = z_2(3,1) = 1, bound 1
  SetFamily p33 = fixtures::powerset(ProductDomain({3, 3}));
  auto bad = sauer_shelah_check(p33, 3, 1);
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].traces == 512);
  CHECK_FALSE(bad[0].pass);
}

TEST_CASE("sauer bound for k=1 is the classical Sauer-Shelah bound") {
  // z_1(m, d+1) = d+1, so the bound is sum_{i<=d} C(m, i).
  SetFamily th = fixtures::thresholds(6);
  auto rows = sauer_shelah_check(th, 5, 3);  // claim VC < 3
  std::uint64_t classical = binomial(5, 0) + binomial(5, 1) + binomial(5, 2);
  for (const auto& r : rows) CHECK(r.bound == classical);
}

TEST_CASE("pruned search agrees with the naive oracle on seeded families") {
  Rng rng(4242);
  VcOptions no_prune;
  no_prune.prune = false;
  for (int it = 0; it < 300; ++it) {
    ProductDomain d = it % 2 == 0 ? ProductDomain({3, 3}) : ProductDomain({6});
    SetFamily fam = fixtures::random_family(d, 6, rng);
    int naive = oracle::naive_vck(fam);
    CHECK(vck_dimension(fam) == naive);
    CHECK(vck_dimension(fam, no_prune) == naive);
  }
}

TEST_CASE("monotonicity, permutation and complement invariance") {
  Rng rng(777);
  for (int it = 0; it < 60; ++it) {
    ProductDomain d({3, 3});
    SetFamily fam = fixtures::random_family(d, 8, rng);
    int dim = vck_dimension(fam);

    // subfamily
    std::vector<Relation> sub;
    for (const Relation& r : fam.members)
      if (rng.next() & 1) sub.push_back(r);
    if (!sub.empty()) CHECK(vck_dimension(SetFamily(d, sub)) <= dim);

    // permute the two axes
    std::vector<Relation> perm;
    for (const Relation& r : fam.members) perm.push_back(permute_axes(r, {1, 0}));
    CHECK(vck_dimension(SetFamily(d, perm)) == dim);

    // complement every member
    std::vector<Relation> comp;
    for (const Relation& r : fam.members) comp.push_back(~r);
    CHECK(vck_dimension(SetFamily(d, comp)) == dim);
  }
}

TEST_CASE("is_shattered iff trace_count hits 2^(d^k)") {
  Rng rng(31);
  for (int it = 0; it < 100; ++it) {
    ProductDomain d({3, 3});
    SetFamily fam = fixtures::random_family(d, 20, rng);
    Box b{{ {0, 1}, {1, 2} }};
    CHECK(is_shattered(fam, b) == (trace_count(fam, b) == 16));
  }
}
