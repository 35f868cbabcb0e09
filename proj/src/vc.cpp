#include "vck/vc.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "vck/rng.hpp"

namespace vck {

void Box::validate(const ProductDomain& dom) const {
  if (axes.size() != static_cast<std::size_t>(dom.arity()))
    throw std::invalid_argument("box arity mismatch");
  if (axes.empty() || axes[0].empty()) throw std::invalid_argument("box must have d >= 1");
  std::size_t d = axes[0].size();
  for (int a = 0; a < dom.arity(); ++a) {
    const auto& s = axes[static_cast<std::size_t>(a)];
    if (s.size() != d) throw std::invalid_argument("box axis subsets must share one size");
    Index prev = -1;
    for (Index v : s) {
      if (v <= prev) throw std::invalid_argument("box axis subsets must be sorted and distinct");
      prev = v;
      if (v < 0 || v >= dom.size(a)) throw std::out_of_range("box index out of range");
    }
  }
}

std::vector<std::size_t> Box::cells(const ProductDomain& dom) const {
  validate(dom);
  std::vector<std::size_t> out;
  std::size_t n = 1;
  for (const auto& s : axes) n *= s.size();
  out.reserve(n);
  std::vector<std::size_t> pos(axes.size(), 0);
  while (true) {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < axes.size(); ++a)
      flat += static_cast<std::size_t>(axes[a][pos[a]]) * dom.stride(static_cast<int>(a));
    out.push_back(flat);
    int a = static_cast<int>(axes.size()) - 1;
    while (a >= 0 && ++pos[static_cast<std::size_t>(a)] == axes[static_cast<std::size_t>(a)].size()) {
      pos[static_cast<std::size_t>(a)] = 0;
      --a;
    }
    if (a < 0) break;
  }
  return out;
}

namespace {

// Distinct membership patterns of the family over the given cells.
std::uint64_t distinct_patterns(const SetFamily& fam, const std::vector<std::size_t>& cells) {
  if (cells.size() <= 64) {
    std::vector<std::uint64_t> pats;
    pats.reserve(fam.size());
    for (const Relation& r : fam.members) {
      std::uint64_t p = 0;
      for (std::size_t j = 0; j < cells.size(); ++j)
        if (r.test(cells[j])) p |= 1ull << j;
      pats.push_back(p);
    }
    std::sort(pats.begin(), pats.end());
    pats.erase(std::unique(pats.begin(), pats.end()), pats.end());
    return pats.size();
  }
  std::vector<std::vector<std::uint64_t>> pats;
  pats.reserve(fam.size());
  std::size_t words = (cells.size() + 63) / 64;
  for (const Relation& r : fam.members) {
    std::vector<std::uint64_t> p(words, 0);
    for (std::size_t j = 0; j < cells.size(); ++j)
      if (r.test(cells[j])) p[j / 64] |= 1ull << (j % 64);
    pats.push_back(std::move(p));
  }
  std::sort(pats.begin(), pats.end());
  pats.erase(std::unique(pats.begin(), pats.end()), pats.end());
  return pats.size();
}

// Cells of the region (chosen axis subsets) x (full remaining axes).
std::vector<std::size_t> region_cells(const ProductDomain& dom,
                                      const std::vector<std::vector<Index>>& chosen) {
  std::vector<std::vector<Index>> vals(static_cast<std::size_t>(dom.arity()));
  for (int a = 0; a < dom.arity(); ++a) {
    if (static_cast<std::size_t>(a) < chosen.size()) {
      vals[static_cast<std::size_t>(a)] = chosen[static_cast<std::size_t>(a)];
    } else {
      vals[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(dom.size(a)));
      for (Index v = 0; v < dom.size(a); ++v) vals[static_cast<std::size_t>(a)][static_cast<std::size_t>(v)] = v;
    }
  }
  std::vector<std::size_t> out;
  std::size_t n = 1;
  for (const auto& s : vals) n *= s.size();
  out.reserve(n);
  std::vector<std::size_t> pos(vals.size(), 0);
  while (true) {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < vals.size(); ++a)
      flat += static_cast<std::size_t>(vals[a][pos[a]]) * dom.stride(static_cast<int>(a));
    out.push_back(flat);
    int a = static_cast<int>(vals.size()) - 1;
    while (a >= 0 && ++pos[static_cast<std::size_t>(a)] == vals[static_cast<std::size_t>(a)].size()) {
      pos[static_cast<std::size_t>(a)] = 0;
      --a;
    }
    if (a < 0) break;
  }
  return out;
}

bool colex_less(const std::vector<Index>& a, const std::vector<Index>& b) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// All d-subsets of [n], in colexicographic order.
std::vector<std::vector<Index>> subsets_colex(Index n, int d) {
  std::vector<std::vector<Index>> out;
  std::vector<Index> cur;
  std::function<void(Index)> rec = [&](Index start) {
    if (static_cast<int>(cur.size()) == d) {
      out.push_back(cur);
      return;
    }
    for (Index v = start; v < n; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  if (d <= n) rec(0);
  std::sort(out.begin(), out.end(), colex_less);
  return out;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void check_shatter_budget(std::uint64_t box_cells, const VcOptions& opt, int lower_bound) {
  if (box_cells > 63 || (1ull << box_cells) > opt.shatter_budget)
    throw BudgetExceeded("shattering budget exceeded: box too large to enumerate", lower_bound);
}

struct BoxSearch {
  const SetFamily& fam;
  const VcOptions& opt;
  int d;
  std::vector<std::vector<std::vector<Index>>> per_axis;  // colex-ordered d-subsets
  std::vector<std::vector<Index>> chosen;
  std::optional<Box> found;

  bool run() { return recurse(0); }

  bool recurse(std::size_t axis) {
    int k = fam.domain.arity();
    for (const auto& subset : per_axis[axis]) {
      chosen.push_back(subset);
      std::uint64_t need = 1ull << ipow(static_cast<std::uint64_t>(d),
                                        static_cast<int>(axis) + 1);
      bool last = axis + 1 == static_cast<std::size_t>(k);
      bool descend = true;
      if (last || opt.prune) {
        std::uint64_t got = distinct_patterns(fam, region_cells(fam.domain, chosen));
        // Traces only collapse when the region shrinks, so fewer than
        // 2^(cells so far) distinct patterns rules out every completion.
        descend = last ? got == need : got >= need;
      }
      if (descend) {
        if (last) {
          found = Box{chosen};
          return true;
        }
        if (recurse(axis + 1)) return true;
      }
      chosen.pop_back();
    }
    return false;
  }
};

}  // namespace

std::uint64_t trace_count(const SetFamily& family, const Box& box, const VcOptions& opt) {
  box.validate(family.domain);
  auto cells = box.cells(family.domain);
  check_shatter_budget(cells.size(), opt, -1);
  return distinct_patterns(family, cells);
}

bool is_shattered(const SetFamily& family, const Box& box, const VcOptions& opt) {
  box.validate(family.domain);
  auto cells = box.cells(family.domain);
  check_shatter_budget(cells.size(), opt, -1);
  return distinct_patterns(family, cells) == (1ull << cells.size());
}

VckResult vck_dimension_witness(const SetFamily& family, const VcOptions& opt) {
  if (family.members.empty()) throw std::invalid_argument("undefined dimension: empty family");
  int k = family.domain.arity();
  Index max_d = family.domain.size(0);
  for (int a = 1; a < k; ++a) max_d = std::min(max_d, family.domain.size(a));

  VckResult best;
  for (int d = 1; d <= max_d; ++d) {
    std::uint64_t cells = ipow(static_cast<std::uint64_t>(d), k);
    check_shatter_budget(cells, opt, best.dim);
    BoxSearch s{family, opt, d, {}, {}, std::nullopt};
    s.per_axis.reserve(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) s.per_axis.push_back(subsets_colex(family.domain.size(a), d));
    if (!s.run()) break;  // no d-box shattered implies none larger either
    best.dim = d;
    best.witness = std::move(s.found);
  }
  return best;
}

int vck_dimension(const SetFamily& family, const VcOptions& opt) {
  return vck_dimension_witness(family, opt).dim;
}

SetFamily slice_family(const Relation& e) {
  const ProductDomain& dom = e.domain();
  if (dom.arity() < 2) throw std::invalid_argument("relation must have arity >= 2");
  std::vector<Relation> members;
  for (Index b = 0; b < dom.size(dom.arity() - 1); ++b) {
    Relation s = slice_last(e, b);
    bool dup = false;
    for (const Relation& m : members)
      if (m == s) {
        dup = true;
        break;
      }
    if (!dup) members.push_back(std::move(s));
  }
  std::vector<Index> head(dom.sizes().begin(), dom.sizes().end() - 1);
  return SetFamily(ProductDomain(head), std::move(members));
}

int vck_of_relation(const Relation& e, int k, const VcOptions& opt) {
  if (e.domain().arity() != k + 1)
    throw std::invalid_argument("relation arity must be k+1");
  return vck_dimension(slice_family(e), opt);
}

std::uint64_t zarankiewicz(int k, int m, int s, std::uint64_t budget) {
  if (k < 1 || m < 1 || s < 1) throw std::invalid_argument("zarankiewicz needs k, m, s >= 1");

  static std::map<std::tuple<int, int, int>, std::uint64_t> memo;
  static std::mutex memo_mu;
  {
    std::lock_guard<std::mutex> g(memo_mu);
    auto it = memo.find({k, m, s});
    if (it != memo.end()) return it->second;
  }

  std::uint64_t z;
  std::uint64_t cells = ipow(static_cast<std::uint64_t>(m), k);
  if (s > m) {
    z = cells + 1;  // no complete sub-hypergraph exists at all
  } else if (k == 1) {
    z = static_cast<std::uint64_t>(s);
  } else {
    if (cells > 63 || (1ull << cells) > budget)
      throw BudgetExceeded("zarankiewicz budget exceeded: 2^(m^k) too large");

    // Masks of every complete k-partite sub-hypergraph with parts of size s.
    auto parts = subsets_colex(m, s);
    std::vector<std::uint64_t> grids;
    std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
    while (true) {
      std::uint64_t g = 0;
      std::vector<std::size_t> pos(static_cast<std::size_t>(k), 0);
      while (true) {
        std::uint64_t cell = 0;
        for (int a = 0; a < k; ++a)
          cell = cell * static_cast<std::uint64_t>(m) +
                 static_cast<std::uint64_t>(parts[pick[static_cast<std::size_t>(a)]]
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

    std::uint64_t best = 0;
    std::uint64_t end = 1ull << cells;
    for (std::uint64_t e = 0; e < end; ++e) {
      auto pc = static_cast<std::uint64_t>(__builtin_popcountll(e));
      if (pc <= best) continue;
      bool complete = false;
      for (std::uint64_t g : grids)
        if ((e & g) == g) {
          complete = true;
          break;
        }
      if (!complete) best = pc;
    }
    z = best + 1;
  }

  std::lock_guard<std::mutex> g(memo_mu);
  memo[{k, m, s}] = z;
  return z;
}

std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t num = 1;
  for (int i = 1; i <= r; ++i) {
    num = num * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  }
  return num;
}

std::vector<TraceReport> sauer_shelah_check(const SetFamily& family, int m, int d,
                                            const SauerOptions& opt) {
  const ProductDomain& dom = family.domain;
  int k = dom.arity();
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  for (int a = 0; a < k; ++a)
    if (dom.size(a) < m) throw std::invalid_argument("domain has no m-boxes on axis " + std::to_string(a));

  std::uint64_t z = zarankiewicz(k, m, d);
  std::uint64_t cells = ipow(static_cast<std::uint64_t>(m), k);
  std::uint64_t bound = 0;
  for (std::uint64_t i = 0; i < z && i <= cells; ++i) bound += binomial(static_cast<int>(cells), static_cast<int>(i));

  std::vector<std::vector<std::vector<Index>>> per_axis;
  std::uint64_t box_count = 1;
  for (int a = 0; a < k; ++a) {
    per_axis.push_back(subsets_colex(dom.size(a), m));
    box_count *= per_axis.back().size();
  }

  std::vector<TraceReport> out;
  auto report_box = [&](Box box, bool sampled) {
    TraceReport r;
    r.traces = trace_count(family, box, opt.vc);
    r.box = std::move(box);
    r.z = z;
    r.bound = bound;
    r.pass = r.traces <= bound;
    r.sampled = sampled;
    out.push_back(std::move(r));
  };

  if (box_count <= opt.exhaustive_cutoff) {
    std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
    while (true) {
      Box box;
      for (int a = 0; a < k; ++a) box.axes.push_back(per_axis[static_cast<std::size_t>(a)][pick[static_cast<std::size_t>(a)]]);
      report_box(std::move(box), false);
      int a = k - 1;
      while (a >= 0 && ++pick[static_cast<std::size_t>(a)] == per_axis[static_cast<std::size_t>(a)].size()) {
        pick[static_cast<std::size_t>(a)] = 0;
        --a;
      }
      if (a < 0) break;
    }
  } else {
    Rng rng(mix64(opt.seed ^ 0x5a7e5a7e12345678ull));
    for (std::uint64_t i = 0; i < opt.sample_count; ++i) {
      Box box;
      for (int a = 0; a < k; ++a) {
        const auto& subs = per_axis[static_cast<std::size_t>(a)];
        box.axes.push_back(subs[rng.below(subs.size())]);
      }
      report_box(std::move(box), true);
    }
  }
  return out;
}

}  // namespace vck
