#include <doctest.h>

#include <functional>

#include "vck/boolexpr.hpp"
#include "vck/rng.hpp"

using namespace vck;

namespace {

SetFamily three_sets() {
  ProductDomain d({3, 3});
  Relation a(d), b(d), c(d);
  for (Index x = 0; x < 3; ++x) a.set_point({x, 0});  // column 0
  for (Index y = 0; y < 3; ++y) b.set_point({0, y});  // row 0
  c.set_point({1, 1});
  c.set_point({2, 2});
  return SetFamily(d, {a, b, c});
}

BoolExpr matom(int i) { return BoolExpr::atom(Atom{i, {}, {}}); }

}  // namespace

TEST_CASE("complement of the empty expression is full") {
  SetFamily f = three_sets();
  CHECK(eval_expr(BoolExpr::complement(BoolExpr::none()), f) ==
        Relation::full_on(f.domain));
}

TEST_CASE("excluded middle evaluates to full") {
  SetFamily f = three_sets();
  BoolExpr e = BoolExpr::unite({matom(0), BoolExpr::complement(matom(0))});
  CHECK(eval_expr(e, f) == Relation::full_on(f.domain));
  CHECK(e.serialize() == "!m0|m0");  // canonicalization is syntactic, eval is full
}

TEST_CASE("intersection matches the point-wise oracle") {
  SetFamily f = three_sets();
  Relation expect(f.domain);
  for (std::size_t i = 0; i < f.domain.total(); ++i)
    if (f[0].test(i) && f[1].test(i)) expect.set(i);
  CHECK(eval_expr(BoolExpr::intersect({matom(0), matom(1)}), f) == expect);
}

TEST_CASE("canonicalization is a projection and preserves evaluation") {
  SetFamily f = three_sets();
  Rng rng(21);

  std::function<BoolExpr(int)> gen = [&](int depth) -> BoolExpr {
    if (depth == 0 || rng.below(3) == 0) return matom(static_cast<int>(rng.below(3)));
    switch (rng.below(3)) {
      case 0:
        return BoolExpr::unite({gen(depth - 1), gen(depth - 1)});
      case 1:
        return BoolExpr::intersect({gen(depth - 1), gen(depth - 1)});
      default:
        return BoolExpr::complement(gen(depth - 1));
    }
  };

  for (int it = 0; it < 200; ++it) {
    BoolExpr e = gen(3);
    BoolExpr c = e.canonical();
    CHECK(c.serialize() == c.canonical().serialize());
    CHECK(eval_expr(e, f) == eval_expr(c, f));
  }
}

TEST_CASE("serialization shapes") {
  CHECK(BoolExpr::none().serialize() == "0");
  CHECK(BoolExpr::all().serialize() == "1");
  CHECK(matom(3).serialize() == "m3");
  BoolExpr fib = BoolExpr::atom(Atom{Atom::kSubject, {0, 2}, {1, 0}});
  CHECK(fib.serialize() == "s[0=1,2=0]");
  BoolExpr e = BoolExpr::unite(
      {BoolExpr::intersect({matom(1), BoolExpr::complement(matom(0))}), matom(2)});
  CHECK(e.serialize() == "!m0&m1|m2");
}

TEST_CASE("contradictory terms vanish and absorption applies") {
  BoolExpr contradiction = BoolExpr::intersect({matom(0), BoolExpr::complement(matom(0))});
  CHECK(contradiction.serialize() == "0");
  BoolExpr absorbed = BoolExpr::unite({matom(0), BoolExpr::intersect({matom(0), matom(1)})});
  CHECK(absorbed.serialize() == "m0");
}

TEST_CASE("parse round-trips canonical serializations") {
  SetFamily f = three_sets();
  Relation subject = f[2];
  for (const char* s : {"0", "1", "m0", "!m0&m1|m2", "m0[0=1]|m1&s[1=2]"}) {
    BoolExpr e = BoolExpr::parse(s);
    Relation v1 = eval_expr(e, f, subject);
    BoolExpr r = BoolExpr::parse(e.serialize());
    CHECK(eval_expr(r, f, subject) == v1);
    CHECK(r.serialize() == e.serialize());
  }
  CHECK_THROWS_AS(BoolExpr::parse("m0&&m1"), std::invalid_argument);
  CHECK_THROWS_AS(BoolExpr::parse("s"), std::invalid_argument);
}

TEST_CASE("dangling atom reference errors") {
  SetFamily f = three_sets();
  CHECK_THROWS_AS(eval_expr(matom(7), f), std::out_of_range);
  BoolExpr sub = BoolExpr::atom(Atom{Atom::kSubject, {0}, {0}});
  CHECK_THROWS_AS(eval_expr(sub, f), std::invalid_argument);  // no subject in scope
}

TEST_CASE("expr_less grades by literal count then bytes") {
  BoolExpr a = matom(2);
  BoolExpr b = BoolExpr::intersect({matom(0), matom(1)});
  CHECK(expr_less(a, b));  // 1 literal before 2
  CHECK_FALSE(expr_less(b, a));
  BoolExpr c = BoolExpr::complement(matom(0));  // "!m0"
  CHECK(expr_less(c, a));                       // "!m0" < "m2" bytewise
  CHECK(expr_less(BoolExpr::none(), c));
}

TEST_CASE("subject fibers evaluate through the oracle") {
  SetFamily f = three_sets();
  Relation subject(f.domain);
  subject.set_point({1, 0});
  subject.set_point({1, 2});
  // cylinder over the fiber of the subject at axis0 = 1: {(x,y) : subject(1,y)}
  BoolExpr e = BoolExpr::atom(Atom{Atom::kSubject, {0}, {1}});
  Relation got = eval_expr(e, f, subject);
  for (Index x = 0; x < 3; ++x)
    for (Index y = 0; y < 3; ++y)
      CHECK(got.test_point({x, y}) == subject.test_point({1, y}));
}
