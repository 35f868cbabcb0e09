#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vck/relation.hpp"

namespace vck {

// Expression atom: a family member ("m3"), a fiber of a family member
// ("m3[0=1,2=0]"), or a fiber of the subject set under approximation
// ("s[1=2]"). The subject itself is never an atom. Fiber axes are sorted
// and values are fixed coordinates; evaluation cylinder-expands the fiber
// over the target domain.
struct Atom {
  static constexpr int kSubject = -1;

  int source = 0;            // kSubject or a family member index
  std::vector<int> axes;     // empty => the plain member set
  std::vector<Index> values;

  bool is_fiber() const { return !axes.empty(); }
  bool is_center() const { return !is_fiber(); }
  std::string key() const;

  bool operator==(const Atom& o) const {
    return source == o.source && axes == o.axes && values == o.values;
  }
};

struct Literal {
  Atom atom;
  bool negated = false;
  std::string key() const { return negated ? "!" + atom.key() : atom.key(); }
};

// Canonical disjunctive normal form: terms are intersections of literals with
// pairwise distinct atoms, literals sorted by key; terms sorted by key,
// deduplicated and absorption-free. "0" is the empty union, "1" the empty term.
struct Dnf {
  std::vector<std::vector<Literal>> terms;

  static Dnf none() { return Dnf{}; }
  static Dnf all() { return Dnf{{{}}}; }

  std::size_t literal_count() const {
    std::size_t n = 0;
    for (const auto& t : terms) n += t.size();
    return n;
  }
  std::string serialize() const;
  void normalize();
};

// Evaluation scope: family members resolve plain/member-fiber atoms; the
// subject oracle (membership by flat index) resolves subject-fiber atoms.
struct EvalContext {
  const SetFamily* family = nullptr;
  std::function<bool(std::size_t)> subject;
};

Relation eval_atom(const Atom& a, const EvalContext& ctx);

// Boolean combination tree over atoms. Immutable value type.
class BoolExpr {
 public:
  enum class Kind { Atom, Union, Inter, Compl };

  static BoolExpr atom(Atom a);
  static BoolExpr none();  // empty union, evaluates to the empty set
  static BoolExpr all();   // empty intersection, evaluates to the full set
  static BoolExpr unite(std::vector<BoolExpr> xs);
  static BoolExpr intersect(std::vector<BoolExpr> xs);
  static BoolExpr complement(BoolExpr x);
  static BoolExpr from_dnf(const Dnf& d);

  Kind kind() const { return kind_; }
  const Atom& as_atom() const { return *atom_; }
  const std::vector<BoolExpr>& children() const { return kids_; }

  // Canonicalization is a projection: canonical(canonical(e)) == canonical(e)
  // and evaluation is preserved.
  Dnf to_dnf() const;
  BoolExpr canonical() const { return from_dnf(to_dnf()); }
  std::string serialize() const { return to_dnf().serialize(); }
  std::size_t literal_count() const { return to_dnf().literal_count(); }

  static BoolExpr parse(const std::string& s);

  Relation eval(const EvalContext& ctx) const;

 private:
  BoolExpr(Kind k, std::optional<Atom> a, std::vector<BoolExpr> kids)
      : kind_(k), atom_(std::move(a)), kids_(std::move(kids)) {}

  Kind kind_;
  std::optional<Atom> atom_;
  std::vector<BoolExpr> kids_;
};

inline Relation eval_expr(const BoolExpr& e, const SetFamily& family) {
  EvalContext ctx;
  ctx.family = &family;
  return e.eval(ctx);
}

inline Relation eval_expr(const BoolExpr& e, const SetFamily& family, const Relation& subject) {
  subject.check_same_domain(Relation(family.domain));
  EvalContext ctx;
  ctx.family = &family;
  const Relation* s = &subject;
  ctx.subject = [s](std::size_t f) { return s->test(f); };
  return e.eval(ctx);
}

// Total order on expressions: graded by literal count, ties broken by the
// canonical serialization compared bytewise. "First Boolean combination"
// everywhere in the library means least in this order.
bool expr_less(const BoolExpr& a, const BoolExpr& b);

}  // namespace vck
