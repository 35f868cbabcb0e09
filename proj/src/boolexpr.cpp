#include "vck/boolexpr.hpp"

#include <algorithm>
#include <stdexcept>

namespace vck {

std::string Atom::key() const {
  std::string s = source == kSubject ? "s" : "m" + std::to_string(source);
  if (!axes.empty()) {
    s += '[';
    for (std::size_t i = 0; i < axes.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(axes[i]);
      s += '=';
      s += std::to_string(values[i]);
    }
    s += ']';
  }
  return s;
}

std::string Dnf::serialize() const {
  if (terms.empty()) return "0";
  std::string s;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (t) s += '|';
    if (terms[t].empty()) {
      s += '1';
      continue;
    }
    for (std::size_t i = 0; i < terms[t].size(); ++i) {
      if (i) s += '&';
      s += terms[t][i].key();
    }
  }
  return s;
}

namespace {

std::string term_key(const std::vector<Literal>& t) {
  if (t.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += '&';
    s += t[i].key();
  }
  return s;
}

// Literals order by (atom, polarity) so both polarities of an atom sit
// adjacent after sorting.
bool lit_less(const Literal& a, const Literal& b) {
  std::string ka = a.atom.key(), kb = b.atom.key();
  if (ka != kb) return ka < kb;
  return a.negated < b.negated;
}

// Sorted literal list or nullopt when the term is contradictory.
std::optional<std::vector<Literal>> clean_term(std::vector<Literal> t) {
  std::sort(t.begin(), t.end(), lit_less);
  std::vector<Literal> out;
  for (const Literal& l : t) {
    if (!out.empty() && out.back().atom == l.atom) {
      if (out.back().negated == l.negated) continue;  // duplicate literal
      return std::nullopt;                            // a & !a
    }
    out.push_back(l);
  }
  return out;
}

bool term_subset(const std::vector<Literal>& a, const std::vector<Literal>& b) {
  // Literal-set inclusion on terms sorted by lit_less.
  std::size_t j = 0;
  for (const Literal& l : a) {
    while (j < b.size() && lit_less(b[j], l)) ++j;
    if (j == b.size() || lit_less(l, b[j])) return false;
    ++j;
  }
  return true;
}

}  // namespace

void Dnf::normalize() {
  std::vector<std::vector<Literal>> cleaned;
  for (auto& t : terms) {
    auto c = clean_term(std::move(t));
    if (c) cleaned.push_back(std::move(*c));
  }
  std::sort(cleaned.begin(), cleaned.end(),
            [](const auto& a, const auto& b) { return term_key(a) < term_key(b); });
  cleaned.erase(std::unique(cleaned.begin(), cleaned.end(),
                            [](const auto& a, const auto& b) {
                              return term_key(a) == term_key(b);
                            }),
                cleaned.end());
  // Absorption: a term containing another term's literal set is redundant.
  std::vector<std::vector<Literal>> kept;
  for (std::size_t i = 0; i < cleaned.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < cleaned.size() && !redundant; ++j)
      if (i != j && term_subset(cleaned[j], cleaned[i])) redundant = true;
    if (!redundant) kept.push_back(cleaned[i]);
  }
  terms = std::move(kept);
}

BoolExpr BoolExpr::atom(Atom a) { return BoolExpr(Kind::Atom, std::move(a), {}); }
BoolExpr BoolExpr::none() { return BoolExpr(Kind::Union, std::nullopt, {}); }
BoolExpr BoolExpr::all() { return BoolExpr(Kind::Inter, std::nullopt, {}); }
BoolExpr BoolExpr::unite(std::vector<BoolExpr> xs) {
  return BoolExpr(Kind::Union, std::nullopt, std::move(xs));
}
BoolExpr BoolExpr::intersect(std::vector<BoolExpr> xs) {
  return BoolExpr(Kind::Inter, std::nullopt, std::move(xs));
}
BoolExpr BoolExpr::complement(BoolExpr x) {
  return BoolExpr(Kind::Compl, std::nullopt, {std::move(x)});
}

BoolExpr BoolExpr::from_dnf(const Dnf& d) {
  std::vector<BoolExpr> terms;
  for (const auto& t : d.terms) {
    std::vector<BoolExpr> lits;
    for (const Literal& l : t) {
      BoolExpr a = BoolExpr::atom(l.atom);
      lits.push_back(l.negated ? BoolExpr::complement(std::move(a)) : std::move(a));
    }
    terms.push_back(BoolExpr::intersect(std::move(lits)));
  }
  return BoolExpr::unite(std::move(terms));
}

namespace {

Dnf dnf_union(Dnf a, const Dnf& b) {
  a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
  a.normalize();
  return a;
}

Dnf dnf_inter(const Dnf& a, const Dnf& b) {
  Dnf out;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) {
      std::vector<Literal> merged = ta;
      merged.insert(merged.end(), tb.begin(), tb.end());
      out.terms.push_back(std::move(merged));
    }
  out.normalize();
  return out;
}

Dnf dnf_negate(const Dnf& a) {
  // De Morgan: complement of a union of terms is the intersection of the
  // complements, each of which is a union of negated literals.
  Dnf out = Dnf::all();
  for (const auto& t : a.terms) {
    Dnf factor;
    for (const Literal& l : t) factor.terms.push_back({Literal{l.atom, !l.negated}});
    factor.normalize();
    out = dnf_inter(out, factor);
  }
  return out;
}

}  // namespace

Dnf BoolExpr::to_dnf() const {
  switch (kind_) {
    case Kind::Atom: {
      Dnf d;
      d.terms.push_back({Literal{*atom_, false}});
      return d;
    }
    case Kind::Union: {
      Dnf d = Dnf::none();
      for (const BoolExpr& k : kids_) d = dnf_union(std::move(d), k.to_dnf());
      return d;
    }
    case Kind::Inter: {
      Dnf d = Dnf::all();
      for (const BoolExpr& k : kids_) d = dnf_inter(d, k.to_dnf());
      return d;
    }
    case Kind::Compl:
      return dnf_negate(kids_[0].to_dnf());
  }
  throw std::logic_error("unreachable");
}

Relation eval_atom(const Atom& a, const EvalContext& ctx) {
  if (ctx.family == nullptr) throw std::invalid_argument("evaluation needs a family");
  const ProductDomain& dom = ctx.family->domain;
  if (a.source == Atom::kSubject) {
    if (!ctx.subject) throw std::invalid_argument("dangling atom reference: no subject in scope");
    if (a.axes.empty()) throw std::invalid_argument("subject atom must be a fiber");
    Relation out(dom);
    Point p(static_cast<std::size_t>(dom.arity()), 0);
    Point q = p;
    std::size_t flat = 0;
    do {
      q = p;
      for (std::size_t i = 0; i < a.axes.size(); ++i) {
        if (a.axes[i] < 0 || a.axes[i] >= dom.arity())
          throw std::out_of_range("fiber axis index out of range");
        q[static_cast<std::size_t>(a.axes[i])] = a.values[i];
      }
      if (ctx.subject(dom.flatten(q))) out.set(flat);
      ++flat;
    } while (dom.advance(p));
    return out;
  }
  if (a.source < 0 || static_cast<std::size_t>(a.source) >= ctx.family->size())
    throw std::out_of_range("dangling atom reference: member " + std::to_string(a.source));
  const Relation& m = (*ctx.family)[static_cast<std::size_t>(a.source)];
  if (a.axes.empty()) return m;
  return cylinder_expand(FiberSpec{&m, a.axes, a.values}, dom);
}

Relation BoolExpr::eval(const EvalContext& ctx) const {
  if (ctx.family == nullptr) throw std::invalid_argument("evaluation needs a family");
  const ProductDomain& dom = ctx.family->domain;
  switch (kind_) {
    case Kind::Atom:
      return eval_atom(*atom_, ctx);
    case Kind::Union: {
      Relation r = Relation::empty_on(dom);
      for (const BoolExpr& k : kids_) r = r | k.eval(ctx);
      return r;
    }
    case Kind::Inter: {
      Relation r = Relation::full_on(dom);
      for (const BoolExpr& k : kids_) r = r & k.eval(ctx);
      return r;
    }
    case Kind::Compl:
      return ~kids_[0].eval(ctx);
  }
  throw std::logic_error("unreachable");
}

namespace {

struct Parser {
  const std::string& s;
  std::size_t i = 0;

  explicit Parser(const std::string& str) : s(str) {}

  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("bad expression '" + s + "': " + why);
  }

  bool eat(char c) {
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  long long number() {
    std::size_t start = i;
    if (eat('-')) {
    }
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) fail("expected number");
    return std::stoll(s.substr(start, i - start));
  }

  Atom atom() {
    Atom a;
    if (eat('s')) {
      a.source = Atom::kSubject;
    } else if (eat('m')) {
      a.source = static_cast<int>(number());
    } else {
      fail("expected atom");
    }
    if (eat('[')) {
      while (true) {
        a.axes.push_back(static_cast<int>(number()));
        if (!eat('=')) fail("expected '='");
        a.values.push_back(number());
        if (eat(']')) break;
        if (!eat(',')) fail("expected ',' or ']'");
      }
    }
    if (a.source == Atom::kSubject && a.axes.empty()) fail("subject atom must be a fiber");
    return a;
  }

  std::vector<Literal> term() {
    std::vector<Literal> t;
    if (eat('1')) return t;
    while (true) {
      Literal l;
      l.negated = eat('!');
      l.atom = atom();
      t.push_back(std::move(l));
      if (!eat('&')) break;
    }
    return t;
  }

  Dnf expr() {
    Dnf d;
    if (eat('0')) return d;
    while (true) {
      d.terms.push_back(term());
      if (!eat('|')) break;
    }
    return d;
  }
};

}  // namespace

BoolExpr BoolExpr::parse(const std::string& s) {
  Parser p(s);
  Dnf d = p.expr();
  if (p.i != s.size()) p.fail("trailing characters");
  d.normalize();
  return from_dnf(d);
}

bool expr_less(const BoolExpr& a, const BoolExpr& b) {
  Dnf da = a.to_dnf(), db = b.to_dnf();
  std::size_t la = da.literal_count(), lb = db.literal_count();
  if (la != lb) return la < lb;
  return da.serialize() < db.serialize();
}

}  // namespace vck
