#pragma once

#include <optional>
#include <vector>

#include "vck/measure.hpp"
#include "vck/packing.hpp"
#include "vck/vc.hpp"

namespace vck {

struct Fixing {
  std::vector<int> axes;
  std::vector<Index> values;
};

struct SlicewiseReport {
  int k = 0;
  int arity = 0;
  std::vector<std::pair<Fixing, int>> per_fixing;
  int max = 0;
};

// VC_k of every fiber obtained by fixing |I| = arity-(k+1) coordinates.
SlicewiseReport slicewise_vck(const Relation& e, int k, const VcOptions& opt = {});

// Greedy epsilon-net over the last-axis slices of a 3-ary relation in the
// mu_head symmetric-difference pseudometric: first uncovered slice in index
// order becomes a center. Every slice ends within epsilon of a center and
// centers are pairwise > epsilon apart.
struct FiberNet {
  std::vector<Index> centers;
  std::vector<int> assignment;  // per z, first center index covering it
};
FiberNet fiber_eps_net_with_assignment(const Relation& e, const ProductMeasure& mu_head,
                                       const Rational& epsilon);
std::vector<Index> fiber_eps_net(const Relation& e, const ProductMeasure& mu_head,
                                 const Rational& epsilon);

// One component set S^t_I of a slice-wise decomposition, living on the axes
// I ∪ tail in ascending axis order.
struct Component {
  int t = 0;
  std::vector<int> axes;  // I, subset of the head axes [0..k]
  Relation set;
  Component(int t_, std::vector<int> axes_, Relation set_)
      : t(t_), axes(std::move(axes_)), set(std::move(set_)) {}
};

struct Decomposition {
  int k = 0;                      // head has k+1 axes, the rest are the tail
  std::vector<Index> sizes;       // full domain sizes
  int n = 0;                      // term count
  std::vector<Component> components;
};

enum class DecompMode { AlmostAll, All };

struct DecompRow {
  Point tail;
  Rational dist;
  bool pass = false;
};

struct DecompReport {
  std::vector<DecompRow> rows;
  Rational exception_mass;  // tail mass of rows with dist > epsilon
  Rational max_dist;
  bool pass = false;
};

// Evaluates the union-of-intersections cylinder expression for every tail
// fixing and checks E_z ≈ it within epsilon: mode AlmostAll bounds the tail
// mass of bad fixings by epsilon, mode All bounds the worst distance.
DecompReport verify_decomposition(const Relation& e, const Decomposition& dec,
                                  const ProductMeasure& mu, const Rational& epsilon,
                                  DecompMode mode);

// The decomposition induced by a last-axis slice net: one term per center t
// with the center slice on the head axes gated by the cell of z-values
// assigned to t. Passes mode All at the net's epsilon by construction.
Decomposition induced_decomposition(const Relation& e, const FiberNet& net);

struct SliceWitnessRow {
  Point tail;
  std::optional<Witness> witness;
};

struct SlicewiseCertificate {
  Rational epsilon;
  std::vector<Point> anchors;
  std::vector<SliceWitnessRow> rows;
  ExprBudget budget;
};

// Best-effort constructive search for the slice-wise packing shape: anchors
// are greedy-net tail representatives extended to full points (zero head
// coordinates), then each tail slice gets a first-success expression search
// over anchor-slice atoms, their anchored head fibers (arity <= k) and
// subject fibers varying with the tail (arity <= budget.fiber_arity_cap).
SlicewiseCertificate slicewise_packing_search(const Relation& e, const ProductMeasure& mu, int k,
                                              const Rational& epsilon, const ExprBudget& budget,
                                              int anchor_count);

}  // namespace vck
