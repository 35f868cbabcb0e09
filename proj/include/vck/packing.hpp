#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "vck/boolexpr.hpp"
#include "vck/measure.hpp"

namespace vck {

// Caps on the witness grammar: DNF over literals whose atoms are centers and
// cylinder-expanded fibers. max_centers_used / max_fibers bound the number of
// distinct center / fiber atoms per expression, max_dnf_terms the term count,
// fiber_arity_cap the arity of subject fibers (k-1 in the packing setting).
struct ExprBudget {
  int max_centers_used = 0;
  int max_fibers = 0;
  int max_dnf_terms = 0;
  int fiber_arity_cap = 0;

  void validate(int k) const {
    if (max_centers_used < 0 || max_fibers < 0 || max_dnf_terms < 0 || fiber_arity_cap < 0)
      throw std::invalid_argument("budget fields must be >= 0");
    if (fiber_arity_cap >= k) throw std::invalid_argument("fiber_arity_cap must be < k");
  }
};

struct Witness {
  BoolExpr expr;
  Rational dist;
};

struct PackingCertificate {
  Rational epsilon;
  std::vector<int> centers;
  std::vector<std::optional<Witness>> per_member;  // nullopt = recorded failure
  ExprBudget grammar_budget;
};

// Farthest-first greedy over member order: admit the first member whose
// distance to every current center exceeds epsilon. Always succeeds; each
// member's witness is its nearest center.
PackingCertificate greedy_packing(const SetFamily& family, const ProductMeasure& mu,
                                  const Rational& epsilon);

// For each member S, the first budget-grammar expression D (graded canonical
// order; atoms: centers, plus fibers of S and of the centers with anchor
// coordinates enumerated ascending over the domain) with exact
// mu(S Δ D) <= epsilon, or a failure marker.
PackingCertificate fiber_cover_search(const SetFamily& family, const ProductMeasure& mu,
                                      const Rational& epsilon, const std::vector<int>& centers,
                                      const ExprBudget& budget);

// Re-evaluates every recorded witness exactly; true iff all verify at the
// certificate's epsilon with their recorded distances and no member lacks an
// entry.
bool verify_certificate(const PackingCertificate& cert, const SetFamily& family,
                        const ProductMeasure& mu);

// Monte-Carlo estimate, per member, of the probability that a tuple of
// |centers| sampled anchor points admits a budget-grammar witness within
// epsilon (fiber values restricted to the sampled anchors' projections).
std::vector<Rational> amplified_witness_rate(const SetFamily& family, const ProductMeasure& mu,
                                             const Rational& epsilon,
                                             const std::vector<int>& centers,
                                             const ExprBudget& budget, int trials,
                                             std::uint64_t seed);

// ---- shared candidate enumeration ----

// Atom vocabulary for a witness search. Fiber values come either from full
// ascending enumeration of the domain or from the projections of given
// anchor points.
struct VocabOptions {
  bool center_atoms = true;
  bool subject_fibers = true;
  bool center_fibers = true;
  int subject_fiber_arity_cap = 0;
  int center_fiber_arity_cap = 0;
  int min_fiber_arity = 0;  // skip fibers below this arity (0-ary are constants)
  const std::vector<Point>* anchors = nullptr;  // null = all value tuples
};

std::vector<Atom> build_vocab(const ProductDomain& dom, const std::vector<int>& centers,
                              const VocabOptions& opt);

// Enumerates canonical DNF candidates over a vocabulary in graded order
// (literal count, then serialization bytes), respecting the budget, and
// reports the first one the predicate accepts. Deterministic.
class WitnessSearch {
 public:
  WitnessSearch(ProductDomain dom, std::vector<Atom> vocab, ExprBudget budget,
                std::function<Relation(const Atom&)> atom_eval);

  struct Hit {
    Dnf dnf;
    Relation mask;
  };

  // First candidate accepted by pred, scanning in candidate order.
  std::optional<Hit> first(const std::function<bool(const Relation&)>& pred);

  // All candidates in order; throws if more than cap.
  std::vector<Hit> all(std::size_t cap);

 private:
  void for_each(const std::function<bool(const Dnf&, const Relation&)>& visit);

  ProductDomain dom_;
  std::vector<Atom> vocab_;
  ExprBudget budget_;
  std::function<Relation(const Atom&)> atom_eval_;
};

}  // namespace vck
