#include "concat/contfrac.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace concat {

ContinuedFraction::ContinuedFraction(Expr target, std::vector<BigNat> quotients, long certified_bits, bool terminated)
    : target_(std::move(target)), quotients_(std::move(quotients)), certified_bits_(certified_bits), terminated_(terminated) {
  p_.reserve(quotients_.size());
  q_.reserve(quotients_.size());
  BigNat p2 = 0, p1 = 1, q2 = 1, q1 = 0;
  for (const auto& a : quotients_) {
    BigNat p = a * p1 + p2;
    BigNat q = a * q1 + q2;
    p_.push_back(p);
    q_.push_back(q);
    p2 = p1;
    p1 = p;
    q2 = q1;
    q1 = q;
  }
}

namespace {

void check_index(std::size_t i, std::size_t n) {
  if (i < 1 || i > n) {
    throw std::out_of_range("continued fraction index " + std::to_string(i) + " outside 1.." + std::to_string(n));
  }
}

BigNat floor_of(const Rational& r) {
  BigNat f;
  mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return f;
}

// Euclid on both endpoints of an enclosing interval. A quotient is committed only when
// both endpoints agree on it and neither remainder is zero, so every complete quotient
// of the target lies strictly inside the tracked interval.
std::vector<BigNat> certified_quotients(Rational lo, Rational hi, std::size_t limit) {
  std::vector<BigNat> out;
  while (out.size() < limit) {
    BigNat a = floor_of(lo);
    if (floor_of(hi) != a) break;
    Rational rl = lo - a;
    Rational rh = hi - a;
    if (rl <= 0 || rh <= 0) break;
    out.push_back(a);
    lo = 1 / rh;
    hi = 1 / rl;
  }
  return out;
}

// Exact Euclid; `finished` is set when the expansion ends within the limit.
std::vector<BigNat> rational_quotients(Rational x, std::size_t limit, bool& finished) {
  std::vector<BigNat> out;
  finished = false;
  while (out.size() < limit) {
    BigNat a = floor_of(x);
    out.push_back(a);
    Rational r = x - a;
    if (r == 0) {
      finished = true;
      break;
    }
    x = 1 / r;
  }
  return out;
}

}  // namespace

const BigNat& ContinuedFraction::a(std::size_t i) const {
  check_index(i, size());
  return quotients_[i - 1];
}
const BigNat& ContinuedFraction::p(std::size_t i) const {
  check_index(i, size());
  return p_[i - 1];
}
const BigNat& ContinuedFraction::q(std::size_t i) const {
  check_index(i, size());
  return q_[i - 1];
}

ContinuedFraction expand(const Expr& target, std::size_t terms, long max_bits) {
  if (auto exact = exact_rational(target)) {
    bool done = false;
    auto qs = rational_quotients(*exact, terms, done);
    return ContinuedFraction(target, std::move(qs), 0, done);
  }
  // two bits per doubling of q, plus slack; a_i ~ 10 on average for these targets
  long bits = std::max(kLadderStartBits, static_cast<long>(terms) * 4 + 64);
  bits = std::min(bits, max_bits);
  std::vector<BigNat> best;
  for (;;) {
    std::vector<BigNat> got;
    try {
      const Interval x = eval(target, bits);
      got = certified_quotients(x.lower_rational(), x.upper_rational(), terms);
    } catch (const InsufficientPrecision&) {
    }
    if (got.size() > best.size()) best = std::move(got);
    if (best.size() >= terms) return ContinuedFraction(target, std::move(best), bits, false);
    if (bits >= max_bits) throw ExpansionStalled(best, max_bits);
    bits = std::min(bits * 2, max_bits);
  }
}

std::shared_ptr<const ContinuedFraction> cached_expansion(const Expr& target, std::size_t terms, long max_bits) {
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const ContinuedFraction>> cache;
  const std::string key = target.to_string();
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end() && (it->second->size() >= terms || it->second->terminated())) return it->second;
  }
  // expand outside the lock; a concurrent duplicate expansion is harmless
  auto fresh = std::make_shared<const ContinuedFraction>(expand(target, terms, max_bits));
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[key];
  if (!slot || slot->size() < fresh->size()) slot = fresh;
  return slot->size() >= terms ? slot : fresh;
}

Expr tau_expr() { return log(Expr(10L)) / log(Expr::alpha()); }
Expr tau_inverse_expr() { return log(Expr::alpha()) / log(Expr(10L)); }
std::shared_ptr<const ContinuedFraction> tau(std::size_t terms) { return cached_expansion(tau_expr(), terms); }
std::shared_ptr<const ContinuedFraction> tau_inverse(std::size_t terms) {
  return cached_expansion(tau_inverse_expr(), terms);
}

namespace {

// Calls probe(cf) on longer and longer expansions until it reports success.
template <class F>
auto with_growing(const ContinuedFraction& cf, F probe) {
  std::shared_ptr<const ContinuedFraction> longer;
  const ContinuedFraction* cur = &cf;
  std::size_t want = std::max<std::size_t>(cf.size(), 16);
  for (;;) {
    if (auto r = probe(*cur)) return *r;
    if (cur->terminated()) throw std::out_of_range("continued fraction of a rational ended");
    want *= 2;
    longer = cached_expansion(cf.target(), want);
    cur = longer.get();
  }
}

}  // namespace

IndexedDenominator first_denominator_exceeding(const ContinuedFraction& cf, const BigNat& bound) {
  return with_growing(cf, [&](const ContinuedFraction& c) -> std::optional<IndexedDenominator> {
    for (std::size_t i = 1; i <= c.size(); ++i) {
      if (c.q(i) > bound) return IndexedDenominator{i, c.q(i)};
    }
    return std::nullopt;
  });
}

PartialQuotientMax max_partial_quotient(const ContinuedFraction& cf, const BigNat& max_denominator) {
  if (max_denominator < 1) throw std::invalid_argument("max_partial_quotient: bound must be >= 1");
  return with_growing(cf, [&](const ContinuedFraction& c) -> std::optional<PartialQuotientMax> {
    std::size_t n = 0;
    for (std::size_t i = 1; i <= c.size(); ++i) {
      if (c.q(i) > max_denominator) break;
      n = i;
    }
    const bool complete = n < c.size() || c.terminated();
    if (!complete) return std::nullopt;
    PartialQuotientMax best{1, c.a(1), n};
    const std::size_t last = std::min(n + 1, c.size());
    for (std::size_t i = 2; i <= last; ++i) {
      if (c.a(i) > best.value) {
        best.value = c.a(i);
        best.index = i;
      }
    }
    return best;
  });
}

LegendreResult legendre_locate(const Expr& target, const BigNat& p_in, const BigNat& q_in, long max_bits) {
  if (q_in < 1) throw std::invalid_argument("legendre_locate: q must be >= 1");
  Rational pq(p_in, q_in);
  pq.canonicalize();
  const BigNat p = pq.get_num();
  const BigNat q = pq.get_den();
  const Rational threshold(1, 2 * q * q);
  bool close = false;
  if (auto exact = exact_rational(target)) {
    close = ::abs(*exact - pq) < threshold;
  } else {
    const Expr gap = abs(target - Expr(pq));
    close = compare(gap, Expr(threshold), max_bits) == Ordering::Less;
  }
  if (!close) return NotClose{};
  auto cf = cached_expansion(target, 16, max_bits);
  for (std::size_t want = 16;; want *= 2) {
    cf = cached_expansion(target, want, max_bits);
    for (std::size_t i = 1; i <= cf->size(); ++i) {
      if (cf->q(i) == q && cf->p(i) == p) return IsConvergent{i};
      if (cf->q(i) > q) return NotClose{};
    }
    if (cf->terminated()) return NotClose{};
  }
}

Rational approximation_floor(const ContinuedFraction& cf, const BigNat& q, const BigNat& max_denominator) {
  if (q < 1 || q > max_denominator) throw std::invalid_argument("approximation_floor: need 1 <= q <= max_denominator");
  const auto mx = max_partial_quotient(cf, max_denominator);
  Rational r(BigNat(1), (mx.value + 2) * q * q);
  r.canonicalize();
  return r;
}

}  // namespace concat
