// Shared family generators for tests.
#pragma once

#include <vector>

#include "vck/relation.hpp"
#include "vck/rng.hpp"

namespace fixtures {

using vck::Index;
using vck::ProductDomain;
using vck::Relation;
using vck::Rng;
using vck::SetFamily;

// {∅, {0}, {0,1}, ..., [m]} on the line [m].
inline SetFamily thresholds(Index m) {
  ProductDomain d({m});
  std::vector<Relation> members;
  for (Index i = 0; i <= m; ++i) {
    Relation r(d);
    for (Index j = 0; j < i; ++j) r.set(static_cast<std::size_t>(j));
    members.push_back(std::move(r));
  }
  return SetFamily(d, std::move(members));
}

// All 2^total subsets, ordered by their bit pattern.
inline SetFamily powerset(const ProductDomain& d) {
  std::size_t total = d.total();
  std::vector<Relation> members;
  members.reserve(std::size_t{1} << total);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask) {
    Relation r(d);
    for (std::size_t i = 0; i < total; ++i)
      if (mask & (std::uint64_t{1} << i)) r.set(i);
    members.push_back(std::move(r));
  }
  return SetFamily(d, std::move(members));
}

// Empty set plus every product of intervals, ordered by interval endpoints.
inline SetFamily rectangles(Index n0, Index n1) {
  ProductDomain d({n0, n1});
  std::vector<Relation> members;
  members.push_back(Relation(d));
  for (Index a0 = 0; a0 < n0; ++a0)
    for (Index a1 = a0; a1 < n0; ++a1)
      for (Index b0 = 0; b0 < n1; ++b0)
        for (Index b1 = b0; b1 < n1; ++b1) {
          Relation r(d);
          for (Index x = a0; x <= a1; ++x)
            for (Index y = b0; y <= b1; ++y) r.set_point({x, y});
          members.push_back(std::move(r));
        }
  return SetFamily(d, std::move(members));
}

inline Relation random_relation(const ProductDomain& d, Rng& rng) {
  Relation r(d);
  for (std::size_t i = 0; i < d.total(); ++i)
    if (rng.next() & 1) r.set(i);
  return r;
}

inline SetFamily random_family(const ProductDomain& d, int max_members, Rng& rng) {
  int count = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_members)));
  std::vector<Relation> members;
  for (int i = 0; i < count; ++i) members.push_back(random_relation(d, rng));
  return SetFamily(d, std::move(members));
}

}  // namespace fixtures
