#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vck/relation.hpp"

namespace vck {

// A k-dimensional d-box: one index subset of size d per axis, each sorted
// ascending. Its cells are the product, enumerated row-major (axis 0 slowest).
struct Box {
  std::vector<std::vector<Index>> axes;

  int d() const { return axes.empty() ? 0 : static_cast<int>(axes[0].size()); }

  void validate(const ProductDomain& dom) const;
  std::vector<std::size_t> cells(const ProductDomain& dom) const;
};

struct VcOptions {
  bool prune = true;
  // Refuse shattering checks when the subset count 2^(d^k) exceeds this.
  std::uint64_t shatter_budget = 1ull << 24;
};

// Raised when an enumeration exceeds its configured budget. For dimension
// searches, lower_bound carries the best verified dimension.
struct BudgetExceeded : std::runtime_error {
  int lower_bound;
  explicit BudgetExceeded(const std::string& what, int lb = -1)
      : std::runtime_error(what), lower_bound(lb) {}
};

// Number of distinct traces {box ∩ S : S in family}.
std::uint64_t trace_count(const SetFamily& family, const Box& box, const VcOptions& opt = {});

// True iff every subset of the box is realized as box ∩ S.
bool is_shattered(const SetFamily& family, const Box& box, const VcOptions& opt = {});

struct VckResult {
  int dim = 0;
  std::optional<Box> witness;  // first shattered dim-box in enumeration order
};

// Exact VC_k dimension by box enumeration (per-axis subsets in colex order,
// axes left to right), with a sound trace-collapse prune unless disabled.
VckResult vck_dimension_witness(const SetFamily& family, const VcOptions& opt = {});
int vck_dimension(const SetFamily& family, const VcOptions& opt = {});

// Family of last-coordinate slices of E, deduplicated in first-seen order.
SetFamily slice_family(const Relation& e);

// VC_k of a (k+1)-ary relation through its slice family.
int vck_of_relation(const Relation& e, int k, const VcOptions& opt = {});

// Minimal z such that every k-partite k-hypergraph with parts of size m and
// >= z edges contains the complete k-partite hypergraph with parts of size s.
// Closed form s for k = 1 (s <= m); exhaustive search over 2^(m^k) otherwise.
std::uint64_t zarankiewicz(int k, int m, int s, std::uint64_t budget = 1ull << 25);

struct TraceReport {
  Box box;
  std::uint64_t traces = 0;
  std::uint64_t z = 0;
  std::uint64_t bound = 0;  // sum_{i<z} C(m^k, i)
  bool pass = false;
  bool sampled = false;
};

struct SauerOptions {
  std::uint64_t exhaustive_cutoff = 1000000;  // sample boxes beyond this count
  std::uint64_t sample_count = 100000;
  std::uint64_t seed = 0;
  VcOptions vc;
};

// Trace-bound check against sum_{i<z} C(m^k, i) with z = zarankiewicz(k, m, d),
// for every m-box (or a seeded uniform sample, flagged), under the caller's
// claim that vck_dimension(family) < d.
std::vector<TraceReport> sauer_shelah_check(const SetFamily& family, int m, int d,
                                            const SauerOptions& opt = {});

std::uint64_t binomial(int n, int r);

}  // namespace vck
