#include "vck/regularity.hpp"

#include <algorithm>
#include <cassert>

namespace vck {

namespace {

// All |I|-subsets of [arity] in lexicographic order.
std::vector<std::vector<int>> axis_subsets(int arity, int size) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == size) {
      out.push_back(cur);
      return;
    }
    for (int a = start; a < arity; ++a) {
      cur.push_back(a);
      rec(a + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

ProductDomain sub_domain(const std::vector<Index>& sizes, const std::vector<int>& axes) {
  std::vector<Index> s;
  s.reserve(axes.size());
  for (int a : axes) s.push_back(sizes[static_cast<std::size_t>(a)]);
  return ProductDomain(s);
}

ProductMeasure sub_measure(const ProductMeasure& mu, const std::vector<int>& axes) {
  std::vector<std::vector<Rational>> w;
  w.reserve(axes.size());
  for (int a : axes) w.push_back(mu.axes()[static_cast<std::size_t>(a)]);
  return ProductMeasure(sub_domain(mu.domain().sizes(), axes), std::move(w));
}

}  // namespace

SlicewiseReport slicewise_vck(const Relation& e, int k, const VcOptions& opt) {
  const ProductDomain& dom = e.domain();
  int kp = dom.arity();
  if (k < 1 || kp <= k) throw std::invalid_argument("slicewise_vck needs arity > k >= 1");

  int fix = kp - (k + 1);
  SlicewiseReport rep;
  rep.k = k;
  rep.arity = kp;
  rep.max = 0;

  for (const auto& axes : axis_subsets(kp, fix)) {
    if (axes.empty()) {
      int v = vck_of_relation(e, k, opt);
      rep.per_fixing.push_back({Fixing{{}, {}}, v});
      rep.max = std::max(rep.max, v);
      continue;
    }
    std::vector<Index> vals(axes.size(), 0);
    while (true) {
      Relation fib = fiber_of(e, axes, vals);
      int v = vck_of_relation(fib, k, opt);
      rep.per_fixing.push_back({Fixing{axes, vals}, v});
      rep.max = std::max(rep.max, v);
      int i = static_cast<int>(axes.size()) - 1;
      while (i >= 0 && ++vals[static_cast<std::size_t>(i)] ==
                           dom.size(axes[static_cast<std::size_t>(i)])) {
        vals[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  return rep;
}

FiberNet fiber_eps_net_with_assignment(const Relation& e, const ProductMeasure& mu_head,
                                       const Rational& epsilon) {
  const ProductDomain& dom = e.domain();
  if (dom.arity() != 3) throw std::invalid_argument("fiber_eps_net needs a 3-ary relation");
  if (epsilon <= 0 || epsilon > 1) throw std::invalid_argument("epsilon must be in (0,1]");
  ProductDomain head({dom.size(0), dom.size(1)});
  if (mu_head.domain() != head)
    throw std::invalid_argument("head measure must cover the first two axes");

  Index nz = dom.size(2);
  std::vector<Relation> slices;
  slices.reserve(static_cast<std::size_t>(nz));
  for (Index z = 0; z < nz; ++z) slices.push_back(fiber_of(e, {2}, {z}));

  FiberNet net;
  net.assignment.assign(static_cast<std::size_t>(nz), -1);
  for (Index z = 0; z < nz; ++z) {
    int cover = -1;
    for (std::size_t i = 0; i < net.centers.size(); ++i) {
      if (mu_head.symdiff(slices[static_cast<std::size_t>(z)],
                          slices[static_cast<std::size_t>(net.centers[i])]) <= epsilon) {
        cover = static_cast<int>(i);
        break;
      }
    }
    if (cover < 0) {
      net.centers.push_back(z);
      cover = static_cast<int>(net.centers.size()) - 1;
    }
    net.assignment[static_cast<std::size_t>(z)] = cover;
  }

  // Construction invariants: coverage within epsilon, centers > epsilon apart.
  for (Index z = 0; z < nz; ++z) {
    Index c = net.centers[static_cast<std::size_t>(net.assignment[static_cast<std::size_t>(z)])];
    if (mu_head.symdiff(slices[static_cast<std::size_t>(z)],
                        slices[static_cast<std::size_t>(c)]) > epsilon)
      throw std::logic_error("net coverage invariant violated");
  }
  for (std::size_t i = 0; i < net.centers.size(); ++i)
    for (std::size_t j = i + 1; j < net.centers.size(); ++j)
      if (mu_head.symdiff(slices[static_cast<std::size_t>(net.centers[i])],
                          slices[static_cast<std::size_t>(net.centers[j])]) <= epsilon)
        throw std::logic_error("net separation invariant violated");
  return net;
}

std::vector<Index> fiber_eps_net(const Relation& e, const ProductMeasure& mu_head,
                                 const Rational& epsilon) {
  return fiber_eps_net_with_assignment(e, mu_head, epsilon).centers;
}

DecompReport verify_decomposition(const Relation& e, const Decomposition& dec,
                                  const ProductMeasure& mu, const Rational& epsilon,
                                  DecompMode mode) {
  const ProductDomain& dom = e.domain();
  if (mu.domain() != dom) throw std::invalid_argument("measure/relation domain mismatch");
  if (dec.sizes != dom.sizes()) throw std::invalid_argument("decomposition domain mismatch");
  int kp = dom.arity();
  int k = dec.k;
  if (k < 0 || k + 1 > kp) throw std::invalid_argument("decomposition k out of range");

  std::vector<int> head_axes, tail_axes;
  for (int a = 0; a <= k; ++a) head_axes.push_back(a);
  for (int a = k + 1; a < kp; ++a) tail_axes.push_back(a);

  // Validate component shapes.
  std::vector<int> terms_present;
  for (const Component& c : dec.components) {
    if (c.t < 0 || c.t >= dec.n) throw std::invalid_argument("component term out of range");
    if (static_cast<int>(c.axes.size()) > k)
      throw std::invalid_argument("component |I| must be <= k");
    int prev = -1;
    for (int a : c.axes) {
      if (a <= prev || a > k) throw std::invalid_argument("component axes must be sorted head axes");
      prev = a;
    }
    std::vector<int> carrier = c.axes;
    carrier.insert(carrier.end(), tail_axes.begin(), tail_axes.end());
    if (c.set.domain() != sub_domain(dom.sizes(), carrier))
      throw std::invalid_argument("component set shape mismatch");
    terms_present.push_back(c.t);
  }
  std::sort(terms_present.begin(), terms_present.end());
  terms_present.erase(std::unique(terms_present.begin(), terms_present.end()),
                      terms_present.end());

  ProductDomain head = sub_domain(dom.sizes(), head_axes);
  ProductMeasure mu_head = sub_measure(mu, head_axes);

  DecompReport rep;
  rep.exception_mass = 0;
  rep.max_dist = 0;

  Point tail(tail_axes.size(), 0);
  bool more = true;
  while (more) {
    // E_z on the head axes.
    Relation ez = tail_axes.empty() ? e : fiber_of(e, tail_axes, tail);

    Relation x = Relation::empty_on(head);
    for (int t : terms_present) {
      Relation term = Relation::full_on(head);
      for (const Component& c : dec.components) {
        if (c.t != t) continue;
        // Slice the component at the tail fixing, then cylinder over the head.
        Relation piece(head);
        if (c.axes.empty()) {
          bool bit = tail_axes.empty() ? c.set.test(0) : c.set.test_point(tail);
          piece = bit ? Relation::full_on(head) : Relation::empty_on(head);
        } else {
          Relation on_i(sub_domain(dom.sizes(), c.axes));
          if (tail_axes.empty()) {
            on_i = c.set;
          } else {
            std::vector<int> local_tail;
            for (std::size_t i = 0; i < tail_axes.size(); ++i)
              local_tail.push_back(static_cast<int>(c.axes.size() + i));
            on_i = fiber_of(c.set, local_tail, tail);
          }
          // Cylinder of on_i (axes c.axes) over the head domain.
          Point hp(head_axes.size(), 0);
          std::size_t flat = 0;
          do {
            Point q(c.axes.size());
            for (std::size_t i = 0; i < c.axes.size(); ++i)
              q[i] = hp[static_cast<std::size_t>(c.axes[i])];
            if (on_i.test_point(q)) piece.set(flat);
            ++flat;
          } while (head.advance(hp));
        }
        term = term & piece;
      }
      x = x | term;
    }

    DecompRow row;
    row.tail = tail;
    row.dist = mu_head.symdiff(ez, x);
    row.pass = row.dist <= epsilon;
    if (!row.pass) {
      Rational w = 1;
      for (std::size_t i = 0; i < tail_axes.size(); ++i)
        w *= mu.axes()[static_cast<std::size_t>(tail_axes[i])][static_cast<std::size_t>(tail[i])];
      rep.exception_mass += w;
    }
    rep.max_dist = std::max(rep.max_dist, row.dist);
    rep.rows.push_back(std::move(row));

    if (tail_axes.empty()) break;
    int i = static_cast<int>(tail_axes.size()) - 1;
    while (i >= 0 && ++tail[static_cast<std::size_t>(i)] ==
                         dom.size(tail_axes[static_cast<std::size_t>(i)])) {
      tail[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    more = i >= 0;
  }

  rep.pass = mode == DecompMode::All ? rep.max_dist <= epsilon : rep.exception_mass <= epsilon;
  return rep;
}

Decomposition induced_decomposition(const Relation& e, const FiberNet& net) {
  const ProductDomain& dom = e.domain();
  int kp = dom.arity();
  if (kp < 2) throw std::invalid_argument("induced_decomposition needs arity >= 2");
  Index nz = dom.size(kp - 1);
  if (net.assignment.size() != static_cast<std::size_t>(nz))
    throw std::invalid_argument("assignment length mismatch");

  Decomposition dec;
  dec.k = kp - 1;  // head = all axes, empty tail
  dec.sizes = dom.sizes();
  dec.n = static_cast<int>(net.centers.size());

  std::vector<int> head_axes;
  for (int a = 0; a + 1 < kp; ++a) head_axes.push_back(a);

  for (std::size_t t = 0; t < net.centers.size(); ++t) {
    dec.components.emplace_back(static_cast<int>(t), head_axes,
                                fiber_of(e, {kp - 1}, {net.centers[t]}));
    Relation cell(ProductDomain({nz}));
    for (Index z = 0; z < nz; ++z)
      if (net.assignment[static_cast<std::size_t>(z)] == static_cast<int>(t))
        cell.set(static_cast<std::size_t>(z));
    dec.components.emplace_back(static_cast<int>(t), std::vector<int>{kp - 1}, std::move(cell));
  }
  return dec;
}

SlicewiseCertificate slicewise_packing_search(const Relation& e, const ProductMeasure& mu, int k,
                                              const Rational& epsilon, const ExprBudget& budget,
                                              int anchor_count) {
  const ProductDomain& dom = e.domain();
  int kp = dom.arity();
  if (k < 1 || kp <= k) throw std::invalid_argument("slicewise search needs arity > k >= 1");
  budget.validate(k + 1);
  if (anchor_count < 1) throw std::invalid_argument("anchor_count must be >= 1");

  std::vector<int> head_axes, tail_axes;
  for (int a = 0; a <= k; ++a) head_axes.push_back(a);
  for (int a = k + 1; a < kp; ++a) tail_axes.push_back(a);

  ProductDomain head = sub_domain(dom.sizes(), head_axes);
  ProductMeasure mu_head = sub_measure(mu, head_axes);

  // All tail fixings in ascending mixed-radix order, with their slices.
  std::vector<Point> tails;
  std::vector<Relation> slices;
  {
    Point tail(tail_axes.size(), 0);
    while (true) {
      tails.push_back(tail);
      slices.push_back(tail_axes.empty() ? e : fiber_of(e, tail_axes, tail));
      if (tail_axes.empty()) break;
      int i = static_cast<int>(tail_axes.size()) - 1;
      while (i >= 0 && ++tail[static_cast<std::size_t>(i)] ==
                           dom.size(tail_axes[static_cast<std::size_t>(i)])) {
        tail[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }

  // Greedy net over tail slices; representatives become anchors (zero head).
  std::vector<std::size_t> reps;
  for (std::size_t z = 0; z < slices.size(); ++z) {
    bool covered = false;
    for (std::size_t r : reps)
      if (mu_head.symdiff(slices[z], slices[r]) <= epsilon) {
        covered = true;
        break;
      }
    if (!covered && static_cast<int>(reps.size()) < anchor_count) reps.push_back(z);
  }

  SlicewiseCertificate cert;
  cert.epsilon = epsilon;
  cert.budget = budget;
  std::vector<Relation> anchor_slices;
  for (std::size_t r : reps) {
    Point full(static_cast<std::size_t>(kp), 0);
    for (std::size_t i = 0; i < tail_axes.size(); ++i)
      full[static_cast<std::size_t>(tail_axes[i])] = tails[r][i];
    cert.anchors.push_back(std::move(full));
    anchor_slices.push_back(slices[r]);
  }

  // Synthetic family over the head: the anchor slices, in anchor order.
  SetFamily anchor_family(head, anchor_slices);
  std::vector<int> center_ids;
  for (std::size_t i = 0; i < anchor_slices.size(); ++i) center_ids.push_back(static_cast<int>(i));

  for (std::size_t z = 0; z < slices.size(); ++z) {
    const Relation& subject = slices[z];

    // Anchored fibers of the anchor slices keep their fixed coordinates on
    // the anchors (head coordinates are all zero); subject fibers vary with
    // the tail and stay below arity k.
    std::vector<Point> head_anchor_pts;
    for (std::size_t j = 0; j < cert.anchors.size(); ++j) {
      Point hp(head_axes.size());
      for (std::size_t i = 0; i < head_axes.size(); ++i)
        hp[i] = cert.anchors[j][static_cast<std::size_t>(head_axes[i])];
      head_anchor_pts.push_back(std::move(hp));
    }

    VocabOptions vo_center;
    vo_center.center_atoms = true;
    vo_center.subject_fibers = false;
    vo_center.center_fibers = true;
    vo_center.center_fiber_arity_cap = k;
    vo_center.min_fiber_arity = 1;
    vo_center.anchors = &head_anchor_pts;
    std::vector<Atom> vocab = build_vocab(head, center_ids, vo_center);

    VocabOptions vo_subject;
    vo_subject.center_atoms = false;
    vo_subject.subject_fibers = true;
    vo_subject.center_fibers = false;
    vo_subject.subject_fiber_arity_cap = budget.fiber_arity_cap;
    vo_subject.min_fiber_arity = 1;
    std::vector<Atom> sub = build_vocab(head, {}, vo_subject);
    vocab.insert(vocab.end(), sub.begin(), sub.end());
    std::sort(vocab.begin(), vocab.end(),
              [](const Atom& a, const Atom& b) { return a.key() < b.key(); });
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());

    EvalContext ctx;
    ctx.family = &anchor_family;
    ctx.subject = [&subject](std::size_t f) { return subject.test(f); };

    WitnessSearch ws(head, vocab, budget, [&ctx](const Atom& a) { return eval_atom(a, ctx); });
    auto hit =
        ws.first([&](const Relation& m) { return mu_head.symdiff(subject, m) <= epsilon; });

    SliceWitnessRow row;
    row.tail = tails[z];
    if (hit)
      row.witness = Witness{BoolExpr::from_dnf(hit->dnf), mu_head.symdiff(subject, hit->mask)};
    cert.rows.push_back(std::move(row));
  }
  return cert;
}

}  // namespace vck
