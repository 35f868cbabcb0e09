#pragma once

#include <boost/dynamic_bitset.hpp>

#include <stdexcept>
#include <vector>

#include "vck/domain.hpp"

namespace vck {

// A k'-ary relation: dense membership bit per domain point, row-major with
// axis 0 slowest. Immutable by convention once built (ops return new values).
class Relation {
 public:
  explicit Relation(ProductDomain dom, bool filled = false)
      : dom_(std::move(dom)), bits_(dom_.total()) {
    if (filled) bits_.set();
  }

  static Relation empty_on(const ProductDomain& d) { return Relation(d, false); }
  static Relation full_on(const ProductDomain& d) { return Relation(d, true); }

  static Relation of_points(const ProductDomain& d, const std::vector<Point>& pts) {
    Relation r(d);
    for (const Point& p : pts) r.set(d.flatten(p));
    return r;
  }

  const ProductDomain& domain() const { return dom_; }
  std::size_t total() const { return bits_.size(); }
  std::size_t count() const { return bits_.count(); }
  bool none() const { return bits_.none(); }

  bool test(std::size_t flat) const { return bits_.test(flat); }
  bool test_point(const Point& p) const { return bits_.test(dom_.flatten(p)); }
  void set(std::size_t flat, bool v = true) { bits_.set(flat, v); }
  void set_point(const Point& p, bool v = true) { bits_.set(dom_.flatten(p), v); }

  const boost::dynamic_bitset<>& bits() const { return bits_; }
  boost::dynamic_bitset<>& bits() { return bits_; }

  Relation operator&(const Relation& o) const { return combined(o, bits_ & o.bits_); }
  Relation operator|(const Relation& o) const { return combined(o, bits_ | o.bits_); }
  Relation operator^(const Relation& o) const { return combined(o, bits_ ^ o.bits_); }
  Relation operator~() const {
    Relation r(dom_);
    r.bits_ = ~bits_;
    return r;
  }

  bool operator==(const Relation& o) const { return dom_ == o.dom_ && bits_ == o.bits_; }
  bool operator!=(const Relation& o) const { return !(*this == o); }

  void check_same_domain(const Relation& o) const {
    if (dom_ != o.dom_) throw std::invalid_argument("relation domain mismatch");
  }

 private:
  Relation combined(const Relation& o, boost::dynamic_bitset<> b) const {
    check_same_domain(o);
    Relation r(dom_);
    r.bits_ = std::move(b);
    return r;
  }

  ProductDomain dom_;
  boost::dynamic_bitset<> bits_;
};

// Ordered list of same-domain relations; index 0 is "first" everywhere.
struct SetFamily {
  ProductDomain domain;
  std::vector<Relation> members;

  SetFamily(ProductDomain d, std::vector<Relation> m)
      : domain(std::move(d)), members(std::move(m)) {
    for (const Relation& r : members)
      if (r.domain() != domain) throw std::invalid_argument("family member domain mismatch");
  }

  std::size_t size() const { return members.size(); }
  const Relation& operator[](std::size_t i) const { return members.at(i); }
};

// Fiber S_a: fix the coordinates in `fixed_axes` (sorted, nonempty) to
// `fixed_values` and project to the free axes.
struct FiberSpec {
  const Relation* source = nullptr;
  std::vector<int> fixed_axes;
  std::vector<Index> fixed_values;

  void validate() const {
    if (source == nullptr) throw std::invalid_argument("fiber has no source");
    if (fixed_axes.empty()) throw std::invalid_argument("fiber must fix at least one axis");
    if (fixed_axes.size() != fixed_values.size())
      throw std::invalid_argument("fiber axes/values length mismatch");
    const ProductDomain& d = source->domain();
    int prev = -1;
    for (std::size_t i = 0; i < fixed_axes.size(); ++i) {
      int a = fixed_axes[i];
      if (a <= prev) throw std::invalid_argument("fiber axes must be sorted and distinct");
      prev = a;
      if (a < 0 || a >= d.arity()) throw std::out_of_range("fiber axis index out of range");
      if (fixed_values[i] < 0 || fixed_values[i] >= d.size(a))
        throw std::out_of_range("fiber value out of range on its axis");
    }
  }
};

// Cylinder over a fiber: a point is in the result iff its projection to the
// free axes lies in the fiber (equivalently, overriding the fixed axes by the
// fiber's values lands in the source).
Relation cylinder_expand(const FiberSpec& f, const ProductDomain& target);

// The fiber itself as a relation on the free axes (requires >= 1 free axis).
Relation fiber_of(const Relation& src, const std::vector<int>& axes,
                  const std::vector<Index>& values);

// Membership bit of a fully fixed point (the 0-ary fiber).
bool fiber_bit(const Relation& src, const Point& p);

// Last-coordinate slice E_b viewed on the first arity-1 axes.
Relation slice_last(const Relation& e, Index b);

// Permutes axes: result(p) = r(p . perm), perm[i] = source axis feeding axis i.
Relation permute_axes(const Relation& r, const std::vector<int>& perm);

}  // namespace vck
