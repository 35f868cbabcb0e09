#include "vck/learner.hpp"

#include <algorithm>
#include <cmath>

#include "vck/rng.hpp"
#include "vck/vc.hpp"

namespace vck {

std::vector<std::size_t> dn_set(const ProductDomain& dom, const Point& anchor) {
  if (!dom.valid_point(anchor)) throw std::invalid_argument("invalid anchor");
  std::vector<std::size_t> out;
  for (int i = 0; i < dom.arity(); ++i) {
    // Hyperplane x_i = anchor_i.
    Point p(static_cast<std::size_t>(dom.arity()), 0);
    p[static_cast<std::size_t>(i)] = anchor[static_cast<std::size_t>(i)];
    while (true) {
      out.push_back(dom.flatten(p));
      int a = dom.arity() - 1;
      while (a >= 0) {
        if (a == i) {
          --a;
          continue;
        }
        if (++p[static_cast<std::size_t>(a)] < dom.size(a)) break;
        p[static_cast<std::size_t>(a)] = 0;
        --a;
      }
      if (a < 0) break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RecoveredSlices recover_slices(const SampleSlices& s) {
  const ProductDomain& dom = s.domain();
  int n = dom.arity();
  for (int a = 0; a < n; ++a)
    if (dom.size(a) < 2)
      throw std::invalid_argument("anchor unrecoverable: axis of size 1");

  Point anchor = s.anchor();
  RecoveredSlices out;

  std::vector<unsigned> masks;
  for (unsigned m = 1; m + 1 < (1u << n); ++m) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    if (pa != pb) return pa < pb;
    return a < b;
  });

  for (unsigned m : masks) {
    std::vector<int> axes;
    for (int a = 0; a < n; ++a)
      if (m & (1u << a)) axes.push_back(a);
    std::vector<int> free_axes;
    for (int a = 0; a < n; ++a)
      if (!(m & (1u << a))) free_axes.push_back(a);

    std::vector<Index> fsizes;
    for (int a : free_axes) fsizes.push_back(dom.size(a));
    ProductDomain fdom(fsizes);
    Relation fiber(fdom);

    Point fp(free_axes.size(), 0);
    Point full = anchor;  // fixed axes already carry anchor coordinates
    std::size_t flat = 0;
    do {
      for (std::size_t i = 0; i < free_axes.size(); ++i)
        full[static_cast<std::size_t>(free_axes[i])] = fp[i];
      if (s.label(dom.flatten(full))) fiber.set(flat);
      ++flat;
    } while (fdom.advance(fp));
    out.fibers.emplace_back(std::move(axes), std::move(fiber));
  }

  out.anchor_label = s.label(s.anchor_flat());
  return out;
}

std::int64_t hoeffding_sample_size(const Rational& epsilon, const Rational& delta,
                                   const BigInt& event_count) {
  if (epsilon <= 0 || epsilon >= 1 || delta <= 0 || delta >= 1)
    throw std::invalid_argument("epsilon and delta must be in (0,1)");
  if (event_count < 1) throw std::invalid_argument("event_count must be >= 1");

  // ln(2*E/delta) computed via the bit length of E so huge counts stay finite.
  double ln_e;
  if (event_count <= BigInt(1) << 900) {
    ln_e = std::log(event_count.convert_to<double>());
  } else {
    std::size_t bits = boost::multiprecision::msb(event_count);
    BigInt mant = event_count >> (bits - 52);
    ln_e = std::log(mant.convert_to<double>()) + static_cast<double>(bits - 52) * std::log(2.0);
  }
  double x = (std::log(2.0) + ln_e - std::log(to_double(delta))) /
             (2.0 * to_double(epsilon) * to_double(epsilon));
  auto n = static_cast<std::int64_t>(std::ceil(x));
  return std::max<std::int64_t>(n, 1);
}

namespace {

struct CandidateList {
  std::vector<WitnessSearch::Hit> hits;
};

// Candidate combinations for one learn call: atoms are the centers plus,
// when the budget admits fibers, cylinders over fibers of the centers and of
// the concept data anchored at the amplification-batch points. Concept
// fibers are evaluated strictly through the sample windows.
CandidateList build_learn_candidates(const SetFamily& family, const std::vector<int>& centers,
                                     const ExprBudget& budget,
                                     const std::vector<SampleSlices>* x1) {
  const ProductDomain& dom = family.domain;
  VocabOptions vo;
  vo.subject_fiber_arity_cap = budget.fiber_arity_cap;
  vo.center_fiber_arity_cap = budget.fiber_arity_cap;

  std::vector<Point> anchors;
  if (budget.max_fibers > 0 && x1 != nullptr) {
    anchors.reserve(x1->size());
    for (const SampleSlices& s : *x1) anchors.push_back(s.anchor());
    vo.anchors = &anchors;
  } else {
    vo.subject_fibers = false;
    vo.center_fibers = false;
  }

  std::vector<Atom> vocab = build_vocab(dom, centers, vo);

  // Map each subject-fiber atom to a sample window that can read it.
  std::map<std::string, std::size_t> provider;
  if (vo.subject_fibers && x1 != nullptr) {
    for (const Atom& a : vocab) {
      if (a.source != Atom::kSubject) continue;
      for (std::size_t j = 0; j < x1->size(); ++j) {
        Point ap = (*x1)[j].anchor();
        bool match = true;
        for (std::size_t i = 0; i < a.axes.size(); ++i)
          if (ap[static_cast<std::size_t>(a.axes[i])] != a.values[i]) {
            match = false;
            break;
          }
        if (match) {
          provider.emplace(a.key(), j);
          break;
        }
      }
    }
  }

  auto atom_eval = [&family, x1, provider, &dom](const Atom& a) -> Relation {
    if (a.source != Atom::kSubject) {
      EvalContext ctx;
      ctx.family = &family;
      return eval_atom(a, ctx);
    }
    const SampleSlices& sl = (*x1)[provider.at(a.key())];
    Relation out(dom);
    Point p(static_cast<std::size_t>(dom.arity()), 0);
    Point q = p;
    std::size_t flat = 0;
    do {
      q = p;
      for (std::size_t i = 0; i < a.axes.size(); ++i)
        q[static_cast<std::size_t>(a.axes[i])] = a.values[i];
      if (sl.label(dom.flatten(q))) out.set(flat);
      ++flat;
    } while (dom.advance(p));
    return out;
  };

  WitnessSearch ws(dom, std::move(vocab), budget, atom_eval);
  return CandidateList{ws.all(4u << 20)};
}

// Empirical view of the estimation batch: per-cell sample counts and labels.
struct Histogram {
  std::vector<std::uint32_t> count;
  std::vector<std::uint8_t> label;
  std::vector<std::size_t> occupied;
  std::int64_t n2 = 0;

  explicit Histogram(std::size_t total) : count(total, 0), label(total, 0) {}

  void clear() {
    for (std::size_t c : occupied) count[c] = 0;
    occupied.clear();
    n2 = 0;
  }

  void add(std::size_t flat, bool lab) {
    if (count[flat]++ == 0) {
      occupied.push_back(flat);
      label[flat] = lab;
    }
    ++n2;
  }
};

LearnResult learn_core(const CandidateList& cands, const SetFamily& family,
                       const ProductMeasure& mu, const LearnerConfig& config,
                       const Histogram& hist) {
  const BigInt peps_big = numerator(config.epsilon);
  const BigInt qeps_big = denominator(config.epsilon);
  const bool small_eps = peps_big < (BigInt(1) << 30) && qeps_big < (BigInt(1) << 30);
  const std::int64_t peps = small_eps ? peps_big.convert_to<std::int64_t>() : 0;
  const std::int64_t qeps = small_eps ? qeps_big.convert_to<std::int64_t>() : 0;

  // Stage (ii): first combination whose sample symmetric-difference fraction
  // on the estimation batch is <= 2eps/6 = eps/3.
  const WitnessSearch::Hit* chosen = nullptr;
  for (const auto& hit : cands.hits) {
    std::int64_t diff = 0;
    for (std::size_t c : hist.occupied)
      if (hit.mask.test(c) != static_cast<bool>(hist.label[c]))
        diff += hist.count[c];
    bool ok = small_eps
                  ? static_cast<__int128>(3) * qeps * diff <= static_cast<__int128>(peps) * hist.n2
                  : BigInt(3) * qeps_big * diff <= peps_big * hist.n2;
    if (ok) {
      chosen = &hit;
      break;
    }
  }
  if (chosen == nullptr) return LearnResult{0, false, false, std::nullopt};

  // Stage (iii): first family member within exact 3eps/6 = eps/2.
  if (mu.has_fast_cells() && small_eps) {
    const auto& num = mu.fast_cell_num();
    const std::size_t total = family.domain.total();
    // dist <= eps/2  <=>  2 * q * sum <= p * denom
    const __int128 limit = static_cast<__int128>(peps) * mu.fast_denom();
    for (std::size_t j = 0; j < family.size(); ++j) {
      const Relation& m = family[j];
      std::int64_t sum = 0;
      for (std::size_t c = 0; c < total; ++c)
        if (chosen->mask.test(c) != m.test(c)) sum += num[c];
      if (static_cast<__int128>(2) * qeps * sum <= limit)
        return LearnResult{static_cast<int>(j), true, true, BoolExpr::from_dnf(chosen->dnf)};
    }
  } else {
    const Rational half_eps = config.epsilon / 2;
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (mu.symdiff(chosen->mask, family[j]) <= half_eps)
        return LearnResult{static_cast<int>(j), true, true, BoolExpr::from_dnf(chosen->dnf)};
    }
  }
  return LearnResult{0, true, false, BoolExpr::from_dnf(chosen->dnf)};
}

void check_learner_domain(const ProductDomain& dom) {
  for (int a = 0; a < dom.arity(); ++a)
    if (dom.size(a) < 2) throw std::invalid_argument("learner rejects axes of size 1");
}

}  // namespace

LearnResult learn_H(const LearnerInput& input, const SetFamily& family,
                    const std::vector<int>& centers, const ProductMeasure& mu,
                    const LearnerConfig& config) {
  const ProductDomain& dom = family.domain;
  check_learner_domain(dom);
  if (family.members.empty()) throw std::invalid_argument("family must be nonempty");
  config.budget.validate(dom.arity());
  if (config.n1 < 1 || config.ell < 1 || config.n2 < 1)
    throw std::invalid_argument("n1, ell, n2 must be >= 1");
  if (static_cast<std::size_t>(config.n1) != centers.size())
    throw std::invalid_argument("config n1 must equal the center count");
  for (int c : centers)
    if (c < 0 || static_cast<std::size_t>(c) >= family.size())
      throw std::out_of_range("center index out of range");

  std::size_t m1 = static_cast<std::size_t>(config.ell) * static_cast<std::size_t>(config.n1);
  if (input.batch.size() != m1 + static_cast<std::size_t>(config.n2))
    throw std::invalid_argument("malformed batch split: expected ell*n1 + n2 samples");
  for (const SampleSlices& s : input.batch)
    if (s.domain() != dom) throw std::invalid_argument("sample domain mismatch");

  std::vector<SampleSlices> x1(input.batch.begin(),
                               input.batch.begin() + static_cast<std::ptrdiff_t>(m1));
  CandidateList cands = build_learn_candidates(family, centers, config.budget, &x1);

  Histogram hist(dom.total());
  for (std::size_t j = m1; j < input.batch.size(); ++j)
    hist.add(input.batch[j].anchor_flat(), input.batch[j].label_at_anchor());

  return learn_core(cands, family, mu, config, hist);
}

PacReport pac_experiment(const SetFamily& family, const ProductMeasure& mu,
                         const LearnerConfig& config, int trials, ConceptMode mode) {
  const ProductDomain& dom = family.domain;
  check_learner_domain(dom);
  if (family.members.empty()) throw std::invalid_argument("family must be nonempty");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config.epsilon <= 0 || config.epsilon >= 1 || config.delta <= 0 || config.delta >= 1)
    throw std::invalid_argument("epsilon and delta must be in (0,1)");
  config.budget.validate(dom.arity());

  const Rational eps6 = config.epsilon / 6;
  const Rational dprime = config.delta / 2;

  PackingCertificate greedy = greedy_packing(family, mu, eps6);
  std::vector<int> centers = greedy.centers;
  if (static_cast<int>(centers.size()) > config.n1)
    centers.resize(static_cast<std::size_t>(config.n1));
  const int n1 = static_cast<int>(centers.size());

  PacResolved resolved;
  resolved.centers = centers;
  resolved.n1 = n1;

  if (config.rho_hat) {
    resolved.rho_hat = *config.rho_hat;
  } else {
    constexpr int kRhoTrials = 32;
    auto rates = amplified_witness_rate(family, mu, eps6, centers, config.budget, kRhoTrials,
                                        mix64(config.seed ^ 0x9b97f4a7c15ull));
    Rational rho = 1;
    for (const Rational& r : rates) rho = std::min(rho, r);
    if (rho == 0) {
      rho = Rational(1, kRhoTrials);
      resolved.rho_floored = true;
    }
    resolved.rho_hat = rho;
  }

  resolved.ell = std::max(
      1, static_cast<int>(std::ceil(std::log(1.0 / to_double(dprime)) / to_double(resolved.rho_hat))));
  resolved.n2 = hoeffding_sample_size(
      eps6, dprime,
      BigInt(1) << static_cast<unsigned>(resolved.ell * n1 + 1));

  LearnerConfig rc = config;
  rc.n1 = n1;
  rc.ell = resolved.ell;
  rc.n2 = resolved.n2;

  std::vector<int> concept_ids;
  if (mode == ConceptMode::AllMembers) {
    for (std::size_t i = 0; i < family.size(); ++i) concept_ids.push_back(static_cast<int>(i));
  } else {
    // Seeded sample of 10 distinct members (or all, when fewer).
    Rng rng(mix64(config.seed ^ 0x5ca1ab1eull));
    std::vector<int> all(family.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    for (std::size_t i = 0; i < all.size(); ++i) std::swap(all[i], all[i + rng.below(all.size() - i)]);
    all.resize(std::min<std::size_t>(10, all.size()));
    std::sort(all.begin(), all.end());
    concept_ids = all;
  }

  const bool fiber_free = config.budget.max_fibers == 0;
  std::optional<CandidateList> shared_cands;
  if (fiber_free) shared_cands = build_learn_candidates(family, centers, config.budget, nullptr);

  const std::size_t m1 = static_cast<std::size_t>(rc.ell) * static_cast<std::size_t>(n1);
  Histogram hist(dom.total());

  PacReport report;
  report.resolved = resolved;
  for (int ci : concept_ids) {
    const Relation& f = family[static_cast<std::size_t>(ci)];
    ConceptReport row;
    row.concept_index = ci;
    row.trials = trials;
    row.worst_dist = 0;

    for (int t = 0; t < trials; ++t) {
      Rng rng = substream(config.seed, static_cast<std::uint64_t>(ci), static_cast<std::uint64_t>(t));

      std::vector<SampleSlices> x1;
      x1.reserve(m1);
      for (std::size_t j = 0; j < m1; ++j) x1.emplace_back(f, mu.sample_flat(rng));

      hist.clear();
      for (std::int64_t j = 0; j < rc.n2; ++j) {
        std::size_t flat = mu.sample_flat(rng);
        SampleSlices s(f, flat);
        hist.add(flat, s.label_at_anchor());
      }

      LearnResult res;
      if (fiber_free) {
        res = learn_core(*shared_cands, family, mu, rc, hist);
      } else {
        CandidateList cands = build_learn_candidates(family, centers, config.budget, &x1);
        res = learn_core(cands, family, mu, rc, hist);
      }

      Rational dist = mu.symdiff(family[static_cast<std::size_t>(res.member)], f);
      if (dist > config.epsilon) ++row.failures;
      if (dist > row.worst_dist) row.worst_dist = dist;
    }
    report.concepts.push_back(std::move(row));
  }
  return report;
}

}  // namespace vck
