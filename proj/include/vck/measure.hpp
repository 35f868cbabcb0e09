#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vck/rational.hpp"
#include "vck/relation.hpp"
#include "vck/rng.hpp"

namespace vck {

// Product measure mu_0 x ... x mu_{n-1} with exact nonnegative rational axis
// weights, each axis summing to exactly 1. All measure values are exact.
//
// Internally every axis is put over a common denominator; when the global
// denominator and the worst-case sums fit in int64 a per-cell integer
// numerator table is kept so that measure sums run on machine integers.
class ProductMeasure {
 public:
  ProductMeasure(ProductDomain dom, std::vector<std::vector<Rational>> axes);

  static ProductMeasure uniform(const ProductDomain& d);

  const ProductDomain& domain() const { return dom_; }
  const std::vector<std::vector<Rational>>& axes() const { return axes_; }

  Rational point_weight(const Point& p) const;
  Rational measure(const Relation& r) const;
  Rational symdiff(const Relation& s, const Relation& t) const;

  // Fast exact path: cell numerators over a single int64 denominator.
  bool has_fast_cells() const { return fast_; }
  std::int64_t fast_denom() const { return denom64_; }
  const std::vector<std::int64_t>& fast_cell_num() const { return cell_num_; }

  // Inverse-CDF sampling from one 64-bit draw per axis; thresholds are
  // floor(cum * 2^64), so quantization error is below 2^-64 per axis.
  Index sample_axis(int axis, std::uint64_t r) const;
  Point sample_point(Rng& rng) const;
  std::size_t sample_flat(Rng& rng) const;

 private:
  ProductDomain dom_;
  std::vector<std::vector<Rational>> axes_;
  std::vector<std::vector<std::uint64_t>> cdf_;  // per axis, size n_i - 1

  bool fast_ = false;
  std::int64_t denom64_ = 1;
  std::vector<std::int64_t> cell_num_;  // size total() when fast_
};

// measure_of / symdiff_measure per the module surface.
inline Rational measure_of(const Relation& r, const ProductMeasure& mu) {
  return mu.measure(r);
}
inline Rational symdiff_measure(const Relation& s, const Relation& t, const ProductMeasure& mu) {
  return mu.symdiff(s, t);
}

}  // namespace vck
