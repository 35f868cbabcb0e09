#include "vck/relation.hpp"

#include <algorithm>

namespace vck {

Relation cylinder_expand(const FiberSpec& f, const ProductDomain& target) {
  f.validate();
  if (target != f.source->domain())
    throw std::invalid_argument("cylinder target must equal the fiber source domain");
  const Relation& src = *f.source;
  Relation out(target);
  Point p(static_cast<std::size_t>(target.arity()), 0);
  Point q = p;
  std::size_t flat = 0;
  do {
    q = p;
    for (std::size_t i = 0; i < f.fixed_axes.size(); ++i)
      q[static_cast<std::size_t>(f.fixed_axes[i])] = f.fixed_values[i];
    if (src.test(target.flatten(q))) out.set(flat);
    ++flat;
  } while (target.advance(p));
  return out;
}

Relation fiber_of(const Relation& src, const std::vector<int>& axes,
                  const std::vector<Index>& values) {
  FiberSpec f{&src, axes, values};
  f.validate();
  const ProductDomain& d = src.domain();
  if (axes.size() >= static_cast<std::size_t>(d.arity()))
    throw std::invalid_argument("fiber_of needs at least one free axis");

  std::vector<int> free_axes;
  for (int a = 0; a < d.arity(); ++a)
    if (!std::binary_search(axes.begin(), axes.end(), a)) free_axes.push_back(a);

  std::vector<Index> fsizes;
  fsizes.reserve(free_axes.size());
  for (int a : free_axes) fsizes.push_back(d.size(a));
  ProductDomain fdom(fsizes);

  Relation out(fdom);
  Point fp(free_axes.size(), 0);
  Point full(static_cast<std::size_t>(d.arity()), 0);
  for (std::size_t i = 0; i < axes.size(); ++i)
    full[static_cast<std::size_t>(axes[i])] = values[i];
  std::size_t flat = 0;
  do {
    for (std::size_t i = 0; i < free_axes.size(); ++i)
      full[static_cast<std::size_t>(free_axes[i])] = fp[i];
    if (src.test(d.flatten(full))) out.set(flat);
    ++flat;
  } while (fdom.advance(fp));
  return out;
}

bool fiber_bit(const Relation& src, const Point& p) { return src.test_point(p); }

Relation slice_last(const Relation& e, Index b) {
  const ProductDomain& d = e.domain();
  if (d.arity() < 2) throw std::invalid_argument("slice_last needs arity >= 2");
  int last = d.arity() - 1;
  if (b < 0 || b >= d.size(last)) throw std::out_of_range("slice value out of range");
  return fiber_of(e, {last}, {b});
}

Relation permute_axes(const Relation& r, const std::vector<int>& perm) {
  const ProductDomain& d = r.domain();
  if (perm.size() != static_cast<std::size_t>(d.arity()))
    throw std::invalid_argument("permutation arity mismatch");
  std::vector<Index> nsizes(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) nsizes[i] = d.size(perm[i]);
  ProductDomain nd(nsizes);
  Relation out(nd);
  Point p(perm.size(), 0);
  Point q(perm.size(), 0);
  std::size_t flat = 0;
  do {
    for (std::size_t i = 0; i < perm.size(); ++i)
      q[static_cast<std::size_t>(perm[i])] = p[i];
    if (r.test(d.flatten(q))) out.set(flat);
    ++flat;
  } while (nd.advance(p));
  return out;
}

}  // namespace vck
