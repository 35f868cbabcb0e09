#include "vck/packing.hpp"

#include <algorithm>
#include <cassert>

#include "vck/rng.hpp"
#include "vck/vc.hpp"

namespace vck {

std::vector<Atom> build_vocab(const ProductDomain& dom, const std::vector<int>& centers,
                              const VocabOptions& opt) {
  int k = dom.arity();
  std::vector<Atom> atoms;

  if (opt.center_atoms)
    for (int c : centers) atoms.push_back(Atom{c, {}, {}});

  auto add_fibers_for = [&](int source, int cap) {
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      std::vector<int> axes;
      for (int a = 0; a < k; ++a)
        if (mask & (1u << a)) axes.push_back(a);
      int arity = k - static_cast<int>(axes.size());
      if (arity > cap || arity < opt.min_fiber_arity) continue;

      if (opt.anchors != nullptr) {
        for (const Point& p : *opt.anchors) {
          std::vector<Index> vals;
          vals.reserve(axes.size());
          for (int a : axes) vals.push_back(p[static_cast<std::size_t>(a)]);
          atoms.push_back(Atom{source, axes, std::move(vals)});
        }
      } else {
        // All anchor value tuples in ascending index order.
        std::vector<Index> vals(axes.size(), 0);
        while (true) {
          atoms.push_back(Atom{source, axes, vals});
          int i = static_cast<int>(axes.size()) - 1;
          while (i >= 0 &&
                 ++vals[static_cast<std::size_t>(i)] == dom.size(axes[static_cast<std::size_t>(i)])) {
            vals[static_cast<std::size_t>(i)] = 0;
            --i;
          }
          if (i < 0) break;
        }
      }
    }
  };

  if (opt.subject_fibers) add_fibers_for(Atom::kSubject, opt.subject_fiber_arity_cap);
  if (opt.center_fibers)
    for (int c : centers) add_fibers_for(c, opt.center_fiber_arity_cap);

  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.key() < b.key(); });
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

WitnessSearch::WitnessSearch(ProductDomain dom, std::vector<Atom> vocab, ExprBudget budget,
                             std::function<Relation(const Atom&)> atom_eval)
    : dom_(std::move(dom)),
      vocab_(std::move(vocab)),
      budget_(budget),
      atom_eval_(std::move(atom_eval)) {}

namespace {

struct PoolTerm {
  std::vector<std::size_t> lits;  // indices into the literal table, increasing
  std::string key;
  std::vector<int> atom_ids;  // sorted vocab indices used
  int centers_used = 0;
  int fibers_used = 0;
};

constexpr std::size_t kLayerGuard = 4u << 20;  // resource guard on one layer

}  // namespace

void WitnessSearch::for_each(const std::function<bool(const Dnf&, const Relation&)>& visit) {
  const int max_atoms = budget_.max_centers_used + budget_.max_fibers;
  const int max_terms = budget_.max_dnf_terms;

  // Literal table (atom idx, polarity), sorted by (atom key, polarity).
  struct Lit {
    std::size_t atom;
    bool neg;
    std::string key;
  };
  std::vector<Lit> lits;
  std::vector<std::string> atom_keys(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) atom_keys[i] = vocab_[i].key();
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    lits.push_back({i, false, atom_keys[i]});
    lits.push_back({i, true, "!" + atom_keys[i]});
  }
  std::sort(lits.begin(), lits.end(), [](const Lit& a, const Lit& b) {
    const std::string &ka = a.neg ? a.key.substr(1) : a.key, &kb = b.neg ? b.key.substr(1) : b.key;
    if (ka != kb) return ka < kb;
    return a.neg < b.neg;
  });

  // Lazy evaluation caches.
  std::vector<std::optional<Relation>> atom_mask(vocab_.size());
  auto mask_of_atom = [&](std::size_t i) -> const Relation& {
    if (!atom_mask[i]) atom_mask[i] = atom_eval_(vocab_[i]);
    return *atom_mask[i];
  };

  // Candidate terms pooled by exact size; sizes are generated lazily when a
  // layer first needs them. `order` keeps the pool sorted by key with stable
  // indices for the mask cache.
  std::vector<PoolTerm> pool;
  std::vector<std::size_t> order;
  int pooled_size = 0;
  auto grow_pool = [&](int want) {
    want = std::min(want, std::min(max_atoms, static_cast<int>(vocab_.size())));
    if (want <= pooled_size) return;
    for (int s = pooled_size + 1; s <= want; ++s) {
    std::vector<std::size_t> cur;
    std::vector<int> used_atoms;
    int cu = 0, fu = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      if (static_cast<int>(cur.size()) == s) {
        PoolTerm t;
        t.lits = cur;
        t.atom_ids = used_atoms;
        std::sort(t.atom_ids.begin(), t.atom_ids.end());
        t.centers_used = cu;
        t.fibers_used = fu;
        for (std::size_t j = 0; j < cur.size(); ++j) {
          if (j) t.key += '&';
          t.key += lits[cur[j]].key;
        }
        pool.push_back(std::move(t));
        return;
      }
      for (std::size_t li = start; li < lits.size(); ++li) {
        std::size_t ai = lits[li].atom;
        bool dup = false;
        for (int u : used_atoms)
          if (u == static_cast<int>(ai)) dup = true;
        if (dup) continue;
        bool fiber = vocab_[ai].is_fiber();
        if (fiber && fu + 1 > budget_.max_fibers) continue;
        if (!fiber && cu + 1 > budget_.max_centers_used) continue;
        cur.push_back(li);
        used_atoms.push_back(static_cast<int>(ai));
        fu += fiber;
        cu += !fiber;
        rec(li + 1);
        cu -= !fiber;
        fu -= fiber;
        used_atoms.pop_back();
        cur.pop_back();
      }
    };
    rec(0);
    }
    pooled_size = want;
    order.resize(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pool[a].key < pool[b].key; });
  };

  std::vector<std::optional<Relation>> term_mask(pool.size());
  auto mask_of_term = [&](std::size_t t) -> const Relation& {
    if (!term_mask[t]) {
      Relation m = Relation::full_on(dom_);
      for (std::size_t li : pool[t].lits) {
        const Relation& am = mask_of_atom(lits[li].atom);
        m = lits[li].neg ? (m & ~am) : (m & am);
      }
      term_mask[t] = std::move(m);
    }
    return *term_mask[t];
  };

  // Layer 0: the two constant combinations.
  {
    if (visit(Dnf::none(), Relation::empty_on(dom_))) return;
    if (max_terms >= 1 && visit(Dnf::all(), Relation::full_on(dom_))) return;
  }

  auto term_lits_sorted = [&](std::size_t t) { return pool[t].lits; };  // already increasing
  auto subsumes = [&](std::size_t a, std::size_t b) {
    // term a's literal set contained in term b's
    const auto &la = term_lits_sorted(a), &lb = term_lits_sorted(b);
    return std::includes(lb.begin(), lb.end(), la.begin(), la.end());
  };

  int lmax = max_terms * max_atoms;
  for (int L = 1; L <= lmax; ++L) {
    struct Cand {
      std::string key;
      std::vector<std::size_t> terms;
    };
    std::vector<Cand> layer;

    std::vector<std::size_t> chosen;
    std::vector<int> atoms_union;
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int remaining) {
      if (remaining == 0) {
        Cand c;
        c.terms = chosen;
        for (std::size_t j = 0; j < chosen.size(); ++j) {
          if (j) c.key += '|';
          c.key += pool[chosen[j]].key;
        }
        layer.push_back(std::move(c));
        if (layer.size() > kLayerGuard)
          throw BudgetExceeded("witness search layer exceeds resource guard");
        return;
      }
      if (static_cast<int>(chosen.size()) == max_terms) return;
      for (std::size_t t = start; t < pool.size(); ++t) {
        int sz = static_cast<int>(pool[t].lits.size());
        if (sz > remaining) continue;
        // canonical DNFs only: no term absorbs another
        bool bad = false;
        for (std::size_t o : chosen)
          if (subsumes(o, t) || subsumes(t, o)) {
            bad = true;
            break;
          }
        if (bad) continue;
        std::vector<int> merged;
        std::set_union(atoms_union.begin(), atoms_union.end(), pool[t].atom_ids.begin(),
                       pool[t].atom_ids.end(), std::back_inserter(merged));
        int cu = 0, fu = 0;
        for (int a : merged) (vocab_[static_cast<std::size_t>(a)].is_fiber() ? fu : cu)++;
        if (cu > budget_.max_centers_used || fu > budget_.max_fibers) continue;
        std::vector<int> saved = std::move(atoms_union);
        atoms_union = std::move(merged);
        chosen.push_back(t);
        rec(t + 1, remaining - sz);
        chosen.pop_back();
        atoms_union = std::move(saved);
      }
    };
    rec(0, L);

    std::sort(layer.begin(), layer.end(),
              [](const Cand& a, const Cand& b) { return a.key < b.key; });

    for (const Cand& c : layer) {
      Relation m = Relation::empty_on(dom_);
      for (std::size_t t : c.terms) m = m | mask_of_term(t);
      Dnf d;
      for (std::size_t t : c.terms) {
        std::vector<Literal> tl;
        for (std::size_t li : pool[t].lits) tl.push_back(Literal{vocab_[lits[li].atom], lits[li].neg});
        d.terms.push_back(std::move(tl));
      }
      if (visit(d, m)) return;
    }
  }
}

std::optional<WitnessSearch::Hit> WitnessSearch::first(
    const std::function<bool(const Relation&)>& pred) {
  std::optional<Hit> hit;
  for_each([&](const Dnf& d, const Relation& m) {
    if (pred(m)) {
      hit = Hit{d, m};
      return true;
    }
    return false;
  });
  return hit;
}

std::vector<WitnessSearch::Hit> WitnessSearch::all(std::size_t cap) {
  std::vector<Hit> out;
  for_each([&](const Dnf& d, const Relation& m) {
    out.push_back(Hit{d, m});
    if (out.size() > cap) throw BudgetExceeded("witness enumeration exceeds cap");
    return false;
  });
  return out;
}

PackingCertificate greedy_packing(const SetFamily& family, const ProductMeasure& mu,
                                  const Rational& epsilon) {
  if (family.members.empty()) throw std::invalid_argument("greedy_packing needs a nonempty family");
  if (epsilon <= 0 || epsilon > 1) throw std::invalid_argument("epsilon must be in (0,1]");

  std::vector<int> centers;
  for (std::size_t i = 0; i < family.size(); ++i) {
    bool covered = false;
    for (int c : centers)
      if (mu.symdiff(family[i], family[static_cast<std::size_t>(c)]) <= epsilon) {
        covered = true;
        break;
      }
    if (!covered) centers.push_back(static_cast<int>(i));
  }

  PackingCertificate cert;
  cert.epsilon = epsilon;
  cert.centers = centers;
  cert.grammar_budget = ExprBudget{1, 0, 1, 0};
  for (std::size_t i = 0; i < family.size(); ++i) {
    int nearest = -1;
    Rational best;
    for (int c : centers) {
      Rational d = mu.symdiff(family[i], family[static_cast<std::size_t>(c)]);
      if (nearest < 0 || d < best) {
        nearest = c;
        best = d;
      }
    }
    if (best > epsilon) throw std::logic_error("greedy coverage invariant violated");
    Dnf d;
    d.terms.push_back({Literal{Atom{nearest, {}, {}}, false}});
    cert.per_member.push_back(Witness{BoolExpr::from_dnf(d), best});
  }
  return cert;
}

namespace {

void check_centers(const SetFamily& family, const std::vector<int>& centers) {
  for (int c : centers)
    if (c < 0 || static_cast<std::size_t>(c) >= family.size())
      throw std::out_of_range("center index out of range");
}

}  // namespace

PackingCertificate fiber_cover_search(const SetFamily& family, const ProductMeasure& mu,
                                      const Rational& epsilon, const std::vector<int>& centers,
                                      const ExprBudget& budget) {
  int k = family.domain.arity();
  if (k < 2) throw std::invalid_argument("fiber_cover_search needs family arity >= 2");
  budget.validate(k);
  check_centers(family, centers);

  PackingCertificate cert;
  cert.epsilon = epsilon;
  cert.centers = centers;
  cert.grammar_budget = budget;

  VocabOptions vo;
  vo.subject_fiber_arity_cap = budget.fiber_arity_cap;
  vo.center_fiber_arity_cap = budget.fiber_arity_cap;

  for (std::size_t i = 0; i < family.size(); ++i) {
    const Relation& subject = family[i];
    EvalContext ctx;
    ctx.family = &family;
    ctx.subject = [&subject](std::size_t f) { return subject.test(f); };

    WitnessSearch ws(family.domain, build_vocab(family.domain, centers, vo), budget,
                     [&ctx](const Atom& a) { return eval_atom(a, ctx); });
    auto hit = ws.first([&](const Relation& m) { return mu.symdiff(subject, m) <= epsilon; });
    if (hit)
      cert.per_member.push_back(
          Witness{BoolExpr::from_dnf(hit->dnf), mu.symdiff(subject, hit->mask)});
    else
      cert.per_member.emplace_back();
  }
  return cert;
}

bool verify_certificate(const PackingCertificate& cert, const SetFamily& family,
                        const ProductMeasure& mu) {
  check_centers(family, cert.centers);
  if (cert.per_member.size() != family.size()) return false;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!cert.per_member[i]) continue;  // recorded failure is a valid entry
    const Witness& w = *cert.per_member[i];
    Relation d = eval_expr(w.expr, family, family[i]);
    Rational dist = mu.symdiff(family[i], d);
    if (dist != w.dist || dist > cert.epsilon) return false;
  }
  return true;
}

std::vector<Rational> amplified_witness_rate(const SetFamily& family, const ProductMeasure& mu,
                                             const Rational& epsilon,
                                             const std::vector<int>& centers,
                                             const ExprBudget& budget, int trials,
                                             std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  int k = family.domain.arity();
  budget.validate(k);
  check_centers(family, centers);

  VocabOptions vo;
  vo.subject_fiber_arity_cap = budget.fiber_arity_cap;
  vo.center_fiber_arity_cap = budget.fiber_arity_cap;

  std::vector<Rational> rates;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Relation& subject = family[i];
    EvalContext ctx;
    ctx.family = &family;
    ctx.subject = [&subject](std::size_t f) { return subject.test(f); };

    int successes = 0;
    for (int t = 0; t < trials; ++t) {
      Rng rng = substream(seed, i, static_cast<std::uint64_t>(t));
      std::vector<Point> anchors;
      anchors.reserve(centers.size());
      for (std::size_t j = 0; j < centers.size(); ++j) anchors.push_back(mu.sample_point(rng));
      VocabOptions v = vo;
      v.anchors = &anchors;
      WitnessSearch ws(family.domain, build_vocab(family.domain, centers, v), budget,
                       [&ctx](const Atom& a) { return eval_atom(a, ctx); });
      if (ws.first([&](const Relation& m) { return mu.symdiff(subject, m) <= epsilon; }))
        ++successes;
    }
    rates.push_back(Rational(successes, trials));
  }
  return rates;
}

}  // namespace vck
