// Independent reference implementations used only to check the library.
// Deliberately written in the most literal way, sharing no code with the
// production search paths.
#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "vck/relation.hpp"

namespace oracle {

using vck::Index;
using vck::Point;
using vck::ProductDomain;
using vck::Relation;
using vck::SetFamily;

// Every d-subset of {0..n-1}, plain lexicographic order.
inline void subsets_rec(Index n, int d, Index start, std::vector<Index>& cur,
                        std::vector<std::vector<Index>>& out) {
  if (static_cast<int>(cur.size()) == d) {
    out.push_back(cur);
    return;
  }
  for (Index v = start; v < n; ++v) {
    cur.push_back(v);
    subsets_rec(n, d, v + 1, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<Index>> all_subsets(Index n, int d) {
  std::vector<std::vector<Index>> out;
  std::vector<Index> cur;
  subsets_rec(n, d, 0, cur, out);
  return out;
}

// Is some d-box shattered? No pruning: every box, every trace, via std::set.
inline bool some_box_shattered(const SetFamily& fam, int d) {
  int k = fam.domain.arity();
  std::vector<std::vector<std::vector<Index>>> per_axis;
  for (int a = 0; a < k; ++a) {
    per_axis.push_back(all_subsets(fam.domain.size(a), d));
    if (per_axis.back().empty()) return false;
  }

  std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
  while (true) {
    // cells of this box
    std::vector<std::size_t> cells;
    std::vector<std::size_t> pos(static_cast<std::size_t>(k), 0);
    while (true) {
      Point p(static_cast<std::size_t>(k));
      for (int a = 0; a < k; ++a)
        p[static_cast<std::size_t>(a)] =
            per_axis[static_cast<std::size_t>(a)][pick[static_cast<std::size_t>(a)]]
                    [pos[static_cast<std::size_t>(a)]];
      cells.push_back(fam.domain.flatten(p));
      int a = k - 1;
      while (a >= 0 && ++pos[static_cast<std::size_t>(a)] == static_cast<std::size_t>(d)) {
        pos[static_cast<std::size_t>(a)] = 0;
        --a;
      }
      if (a < 0) break;
    }

    std::set<std::vector<bool>> traces;
    for (const Relation& s : fam.members) {
      std::vector<bool> tr;
      for (std::size_t c : cells) tr.push_back(s.test(c));
      traces.insert(tr);
    }
    std::size_t want = std::size_t{1} << cells.size();
    if (traces.size() == want) return true;

    int a = k - 1;
    while (a >= 0 &&
           ++pick[static_cast<std::size_t>(a)] == per_axis[static_cast<std::size_t>(a)].size()) {
      pick[static_cast<std::size_t>(a)] = 0;
      --a;
    }
    if (a < 0) break;
  }
  return false;
}

inline int naive_vck(const SetFamily& fam) {
  int k = fam.domain.arity();
  Index max_d = fam.domain.size(0);
  for (int a = 1; a < k; ++a) max_d = std::min(max_d, fam.domain.size(a));
  int best = 0;
  for (int d = 1; d <= max_d; ++d) {
    if (!some_box_shattered(fam, d)) break;
    best = d;
  }
  return best;
}

// Zarankiewicz by maximum-free-edge-set recursion over cells: the largest
// K_{s,..,s}-free edge set, found by branching on each cell in or out.
inline int naive_max_free(int k, int m, int s) {
  int cells = 1;
  for (int i = 0; i < k; ++i) cells *= m;

  std::vector<std::vector<Index>> parts = all_subsets(m, s);
  std::vector<std::uint64_t> grids;
  std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
  if (!parts.empty()) {
    while (true) {
      std::uint64_t g = 0;
      std::vector<std::size_t> pos(static_cast<std::size_t>(k), 0);
      while (true) {
        int cell = 0;
        for (int a = 0; a < k; ++a)
          cell = cell * m + static_cast<int>(parts[pick[static_cast<std::size_t>(a)]]
                                                  [pos[static_cast<std::size_t>(a)]]);
        g |= 1ull << cell;
        int a = k - 1;
        while (a >= 0 && ++pos[static_cast<std::size_t>(a)] == static_cast<std::size_t>(s)) {
          pos[static_cast<std::size_t>(a)] = 0;
          --a;
        }
        if (a < 0) break;
      }
      grids.push_back(g);
      int a = k - 1;
      while (a >= 0 && ++pick[static_cast<std::size_t>(a)] == parts.size()) {
        pick[static_cast<std::size_t>(a)] = 0;
        --a;
      }
      if (a < 0) break;
    }
  }

  int best = 0;
  std::function<void(int, std::uint64_t)> rec = [&](int cell, std::uint64_t edges) {
    if (cell == cells) {
      for (std::uint64_t g : grids)
        if ((edges & g) == g) return;
      best = std::max(best, __builtin_popcountll(edges));
      return;
    }
    rec(cell + 1, edges | (1ull << cell));
    rec(cell + 1, edges);
  };
  rec(0, 0);
  return best;
}

inline std::uint64_t naive_zarankiewicz(int k, int m, int s) {
  return static_cast<std::uint64_t>(naive_max_free(k, m, s)) + 1;
}

}  // namespace oracle
