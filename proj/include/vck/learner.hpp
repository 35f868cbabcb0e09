#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "vck/measure.hpp"
#include "vck/packing.hpp"

namespace vck {

// Flat indices of D_n(a): the union of the n axis hyperplanes through the
// anchor, ascending.
std::vector<std::size_t> dn_set(const ProductDomain& dom, const Point& anchor);

// The learner-visible data f|D_n(a). Stored as a view on the concept: labels
// are readable exactly on D_n(a) (asserted), nothing else, so a learner can
// never depend on off-window points.
class SampleSlices {
 public:
  SampleSlices(const Relation& source, const Point& anchor)
      : src_(&source), anchor_flat_(source.domain().flatten(anchor)) {}
  SampleSlices(const Relation& source, std::size_t anchor_flat)
      : src_(&source), anchor_flat_(anchor_flat) {}
  // Views never outlive their source.
  SampleSlices(Relation&&, const Point&) = delete;
  SampleSlices(Relation&&, std::size_t) = delete;

  const ProductDomain& domain() const { return src_->domain(); }
  std::size_t anchor_flat() const { return anchor_flat_; }
  Point anchor() const { return domain().unflatten(anchor_flat_); }

  // p shares at least one coordinate with the anchor.
  bool on_window(std::size_t flat) const {
    const ProductDomain& d = domain();
    for (int a = 0; a < d.arity(); ++a)
      if (d.coord(flat, a) == d.coord(anchor_flat_, a)) return true;
    return false;
  }

  bool label(std::size_t flat) const {
    if (!on_window(flat)) throw std::out_of_range("label query off the sample window");
    return src_->test(flat);
  }
  bool label_at_anchor() const { return src_->test(anchor_flat_); }

 private:
  const Relation* src_;
  std::size_t anchor_flat_;
};

inline SampleSlices restrict_concept(const Relation& f, const Point& anchor) {
  return SampleSlices(f, anchor);
}
SampleSlices restrict_concept(Relation&&, const Point&) = delete;

// All anchor-slices of arity <= n-1 recoverable from one sample window,
// keyed by the fixed axis subset; the full fixing degenerates to the label
// at the anchor.
struct RecoveredSlices {
  std::vector<std::pair<std::vector<int>, Relation>> fibers;  // |u| in [1, n-1]
  bool anchor_label = false;
};

RecoveredSlices recover_slices(const SampleSlices& s);

struct LearnerInput {
  std::vector<SampleSlices> batch;
};

struct LearnerConfig {
  Rational epsilon;
  Rational delta;
  int n1 = 1;            // packing-center count target
  int ell = 1;           // amplification
  std::int64_t n2 = 1;   // empirical-estimation sample count
  ExprBudget budget;
  std::uint64_t seed = 0;
  std::optional<Rational> rho_hat;
};

// Smallest integer >= ln(2*event_count/delta) / (2*epsilon^2).
std::int64_t hoeffding_sample_size(const Rational& epsilon, const Rational& delta,
                                   const BigInt& event_count);

struct LearnResult {
  int member = 0;   // index of the returned hypothesis (always a family member)
  bool d_found = false;  // stage (ii) found a combination within 2eps/6
  bool s_found = false;  // stage (iii) found a member within 3eps/6 of it
  std::optional<BoolExpr> chosen_d;
};

// The two-phase proper learning function: on the amplification batch it
// reconstructs fiber data through recover_slices only, picks the first
// budget-grammar combination whose sample symmetric-difference fraction on
// the estimation batch is <= 2eps/6, then returns the first family member
// within exact 3eps/6 of it (member 0 on any failure).
LearnResult learn_H(const LearnerInput& input, const SetFamily& family,
                    const std::vector<int>& centers, const ProductMeasure& mu,
                    const LearnerConfig& config);

enum class ConceptMode { AllMembers, Sampled };

struct ConceptReport {
  int concept_index = 0;
  int trials = 0;
  int failures = 0;
  Rational worst_dist;
};

struct PacResolved {
  std::vector<int> centers;
  int n1 = 0;
  int ell = 0;
  std::int64_t n2 = 0;
  Rational rho_hat;
  bool rho_floored = false;
};

struct PacReport {
  PacResolved resolved;
  std::vector<ConceptReport> concepts;
};

// Seeded end-to-end experiment: builds centers by greedy packing at eps/6,
// derives ell and N2, then measures the empirical failure rate
// Pr[mu(H(...) Δ f) > eps] per concept with exact symmetric differences.
PacReport pac_experiment(const SetFamily& family, const ProductMeasure& mu,
                         const LearnerConfig& config, int trials, ConceptMode mode);

}  // namespace vck
