#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace vck {

using Index = std::int64_t;
using Point = std::vector<Index>;  // one 0-based coordinate per axis

// Finite product domain V_0 x ... x V_{n-1}, each axis an initial segment
// of the integers. Points are addressed row-major with axis 0 slowest.
class ProductDomain {
 public:
  explicit ProductDomain(std::vector<Index> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw std::invalid_argument("domain arity must be >= 1");
    total_ = 1;
    for (Index s : sizes_) {
      if (s < 1) throw std::invalid_argument("axis size must be >= 1");
      if (total_ > static_cast<std::size_t>(-1) / static_cast<std::size_t>(s))
        throw std::invalid_argument("domain too large for addressable range");
      total_ *= static_cast<std::size_t>(s);
    }
    strides_.assign(sizes_.size(), 1);
    for (int i = static_cast<int>(sizes_.size()) - 2; i >= 0; --i)
      strides_[i] = strides_[i + 1] * static_cast<std::size_t>(sizes_[i + 1]);
  }

  int arity() const { return static_cast<int>(sizes_.size()); }
  Index size(int axis) const { return sizes_.at(static_cast<std::size_t>(axis)); }
  const std::vector<Index>& sizes() const { return sizes_; }
  std::size_t total() const { return total_; }
  std::size_t stride(int axis) const { return strides_.at(static_cast<std::size_t>(axis)); }

  bool valid_point(const Point& p) const {
    if (p.size() != sizes_.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] < 0 || p[i] >= sizes_[i]) return false;
    return true;
  }

  std::size_t flatten(const Point& p) const {
    if (!valid_point(p)) throw std::out_of_range("point outside domain");
    std::size_t f = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      f += static_cast<std::size_t>(p[i]) * strides_[i];
    return f;
  }

  Point unflatten(std::size_t f) const {
    Point p(sizes_.size());
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      p[i] = static_cast<Index>(f / strides_[i]);
      f %= strides_[i];
    }
    return p;
  }

  Index coord(std::size_t flat, int axis) const {
    return static_cast<Index>(flat / strides_[static_cast<std::size_t>(axis)]) %
           sizes_[static_cast<std::size_t>(axis)];
  }

  // Advances p through the domain in row-major order; false after the last point.
  bool advance(Point& p) const {
    for (int i = arity() - 1; i >= 0; --i) {
      if (++p[static_cast<std::size_t>(i)] < sizes_[static_cast<std::size_t>(i)]) return true;
      p[static_cast<std::size_t>(i)] = 0;
    }
    return false;
  }

  bool operator==(const ProductDomain& o) const { return sizes_ == o.sizes_; }
  bool operator!=(const ProductDomain& o) const { return !(*this == o); }

 private:
  std::vector<Index> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t total_;
};

}  // namespace vck
