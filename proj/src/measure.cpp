#include "vck/measure.hpp"

#include <limits>

namespace vck {

namespace {

BigInt lcm_big(const BigInt& a, const BigInt& b) {
  return a / boost::multiprecision::gcd(a, b) * b;
}

}  // namespace

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt p(s.substr(0, slash));
    BigInt q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator");
    return Rational(p, q);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

std::string format_rational(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

ProductMeasure::ProductMeasure(ProductDomain dom, std::vector<std::vector<Rational>> axes)
    : dom_(std::move(dom)), axes_(std::move(axes)) {
  if (axes_.size() != static_cast<std::size_t>(dom_.arity()))
    throw std::invalid_argument("measure axis count must match domain arity");
  for (int a = 0; a < dom_.arity(); ++a) {
    const auto& w = axes_[static_cast<std::size_t>(a)];
    if (w.size() != static_cast<std::size_t>(dom_.size(a)))
      throw std::invalid_argument("axis weight count must match axis size");
    Rational sum = 0;
    for (const Rational& x : w) {
      if (x < 0) throw std::invalid_argument("axis weights must be nonnegative");
      sum += x;
    }
    if (sum != 1) throw std::invalid_argument("axis weights must sum to exactly 1");
  }

  // Common denominator per axis, global denominator = product.
  BigInt denom = 1;
  std::vector<std::vector<BigInt>> nums(axes_.size());
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    BigInt d = 1;
    for (const Rational& x : axes_[a]) d = lcm_big(d, denominator(x));
    nums[a].reserve(axes_[a].size());
    for (const Rational& x : axes_[a]) nums[a].push_back(numerator(x) * (d / denominator(x)));
    denom *= d;
  }

  const BigInt i64max = std::numeric_limits<std::int64_t>::max();
  if (denom <= i64max / static_cast<std::int64_t>(dom_.total() + 1)) {
    fast_ = true;
    denom64_ = denom.convert_to<std::int64_t>();
    cell_num_.assign(dom_.total(), 0);
    Point p(static_cast<std::size_t>(dom_.arity()), 0);
    std::size_t flat = 0;
    do {
      BigInt prod = 1;
      for (std::size_t a = 0; a < axes_.size(); ++a) prod *= nums[a][static_cast<std::size_t>(p[a])];
      // Rescale each axis numerator to the global denominator.
      // prod currently carries product of per-axis numerators over product of
      // per-axis denominators, which is exactly the global denominator.
      cell_num_[flat] = prod.convert_to<std::int64_t>();
      ++flat;
    } while (dom_.advance(p));
  }

  // Sampling thresholds: floor(cumulative * 2^64), one draw per axis.
  cdf_.resize(axes_.size());
  BigInt two64 = BigInt(1) << 64;
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    Rational cum = 0;
    for (std::size_t i = 0; i + 1 < axes_[a].size(); ++i) {
      cum += axes_[a][i];
      BigInt t = numerator(cum) * two64 / denominator(cum);
      cdf_[a].push_back(t.convert_to<std::uint64_t>());
    }
  }
}

ProductMeasure ProductMeasure::uniform(const ProductDomain& d) {
  std::vector<std::vector<Rational>> axes(static_cast<std::size_t>(d.arity()));
  for (int a = 0; a < d.arity(); ++a)
    axes[static_cast<std::size_t>(a)].assign(static_cast<std::size_t>(d.size(a)),
                                             Rational(1, d.size(a)));
  return ProductMeasure(d, std::move(axes));
}

Rational ProductMeasure::point_weight(const Point& p) const {
  if (!dom_.valid_point(p)) throw std::out_of_range("point outside domain");
  Rational w = 1;
  for (std::size_t a = 0; a < axes_.size(); ++a) w *= axes_[a][static_cast<std::size_t>(p[a])];
  return w;
}

Rational ProductMeasure::measure(const Relation& r) const {
  if (r.domain() != dom_) throw std::invalid_argument("measure/relation domain mismatch");
  if (fast_) {
    std::int64_t sum = 0;
    const auto& b = r.bits();
    for (std::size_t i = b.find_first(); i != boost::dynamic_bitset<>::npos; i = b.find_next(i))
      sum += cell_num_[i];
    return Rational(sum, denom64_);
  }
  Rational sum = 0;
  Point p(static_cast<std::size_t>(dom_.arity()), 0);
  std::size_t flat = 0;
  do {
    if (r.test(flat)) sum += point_weight(p);
    ++flat;
  } while (dom_.advance(p));
  return sum;
}

Rational ProductMeasure::symdiff(const Relation& s, const Relation& t) const {
  s.check_same_domain(t);
  return measure(s ^ t);
}

Index ProductMeasure::sample_axis(int axis, std::uint64_t r) const {
  const auto& thr = cdf_[static_cast<std::size_t>(axis)];
  std::size_t i = 0;
  while (i < thr.size() && r >= thr[i]) ++i;
  return static_cast<Index>(i);
}

Point ProductMeasure::sample_point(Rng& rng) const {
  Point p(static_cast<std::size_t>(dom_.arity()));
  for (int a = 0; a < dom_.arity(); ++a) p[static_cast<std::size_t>(a)] = sample_axis(a, rng.next());
  return p;
}

std::size_t ProductMeasure::sample_flat(Rng& rng) const {
  std::size_t f = 0;
  for (int a = 0; a < dom_.arity(); ++a)
    f += static_cast<std::size_t>(sample_axis(a, rng.next())) * dom_.stride(a);
  return f;
}

}  // namespace vck
