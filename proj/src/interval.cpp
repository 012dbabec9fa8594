#include "concat/interval.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <utility>

#include "concat/errors.hpp"

namespace concat {

namespace {

// RAII scratch value
struct Scratch {
  mpfr_t v;
  explicit Scratch(long prec) { mpfr_init2(v, prec); }
  ~Scratch() { mpfr_clear(v); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
};

long merged_precision(const Interval& a, const Interval& b) { return std::max(a.precision(), b.precision()); }

Rational mpfr_to_rational(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return Rational(0);
  BigNat m;
  const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
  Rational r(m);
  if (e >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return r;
}

std::string format_mpfr(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*R*e", digits, rnd, x);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

int default_digits(long prec) { return static_cast<int>(std::ceil(static_cast<double>(prec) * 0.30103)) + 1; }

}  // namespace

Interval::Interval(long precision_bits) : precision_(precision_bits) {
  mpfr_init2(lo_, precision_);
  mpfr_init2(hi_, precision_);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& other) : precision_(other.precision_) {
  mpfr_init2(lo_, precision_);
  mpfr_init2(hi_, precision_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : precision_(other.precision_) {
  mpfr_init2(lo_, precision_);
  mpfr_init2(hi_, precision_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    precision_ = other.precision_;
    mpfr_set_prec(lo_, precision_);
    mpfr_set_prec(hi_, precision_);
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  std::swap(precision_, other.precision_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::exact(const BigNat& v, long precision_bits) {
  Interval r(precision_bits);
  mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
  return r;
}

Interval Interval::exact(const Rational& v, long precision_bits) {
  Interval r(precision_bits);
  mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::hull(const Rational& lo, const Rational& hi, long precision_bits) {
  if (lo > hi) throw std::invalid_argument("Interval::hull: lo > hi");
  Interval r(precision_bits);
  mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

bool Interval::contains(const Rational& x) const {
  return mpfr_cmp_q(lo_, x.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, x.get_mpq_t()) >= 0;
}

bool Interval::overlaps(const Interval& other) const {
  return mpfr_lessequal_p(lo_, other.hi_) && mpfr_lessequal_p(other.lo_, hi_);
}

bool Interval::subset_of(const Interval& other) const {
  return mpfr_lessequal_p(other.lo_, lo_) && mpfr_lessequal_p(hi_, other.hi_);
}

Rational Interval::lower_rational() const { return mpfr_to_rational(lo_); }
Rational Interval::upper_rational() const { return mpfr_to_rational(hi_); }
Rational Interval::width_rational() const { return upper_rational() - lower_rational(); }
double Interval::lower_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::upper_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

long Interval::width_log2() const {
  Scratch w(precision_ + 2);
  mpfr_sub(w.v, hi_, lo_, MPFR_RNDU);
  if (mpfr_zero_p(w.v)) return LONG_MIN / 2;
  return static_cast<long>(mpfr_get_exp(w.v));
}

std::string Interval::lower_decimal(int digits) const {
  return format_mpfr(lo_, digits > 0 ? digits : default_digits(precision_), MPFR_RNDD);
}

std::string Interval::upper_decimal(int digits) const {
  return format_mpfr(hi_, digits > 0 ? digits : default_digits(precision_), MPFR_RNDU);
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(merged_precision(a, b));
  mpfr_add(r.lower(), a.lower(), b.lower(), MPFR_RNDD);
  mpfr_add(r.upper(), a.upper(), b.upper(), MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(merged_precision(a, b));
  mpfr_sub(r.lower(), a.lower(), b.upper(), MPFR_RNDD);
  mpfr_sub(r.upper(), a.upper(), b.lower(), MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a) {
  Interval r(a.precision());
  mpfr_neg(r.lower(), a.upper(), MPFR_RNDD);
  mpfr_neg(r.upper(), a.lower(), MPFR_RNDU);
  return r;
}

namespace {

using BinaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

// Min/max over the four endpoint combinations, each rounded outward.
Interval corner_hull(const Interval& a, const Interval& b, BinaryOp op) {
  const long prec = merged_precision(a, b);
  Interval r(prec);
  Scratch t(prec);
  mpfr_srcptr xs[2] = {a.lower(), a.upper()};
  mpfr_srcptr ys[2] = {b.lower(), b.upper()};
  bool first = true;
  for (auto x : xs) {
    for (auto y : ys) {
      op(t.v, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.v, r.lower())) mpfr_set(r.lower(), t.v, MPFR_RNDD);
      op(t.v, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.v, r.upper())) mpfr_set(r.upper(), t.v, MPFR_RNDU);
      first = false;
    }
  }
  return r;
}

}  // namespace

Interval operator*(const Interval& a, const Interval& b) { return corner_hull(a, b, mpfr_mul); }

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) {
    if (b.is_point()) throw DomainError("division by zero");
    throw InsufficientPrecision("divisor interval contains zero");
  }
  return corner_hull(a, b, mpfr_div);
}

Interval abs(const Interval& a) {
  if (mpfr_sgn(a.lower()) >= 0) return a;
  if (mpfr_sgn(a.upper()) <= 0) return -a;
  Interval r(a.precision());
  mpfr_set_zero(r.lower(), 1);
  if (mpfr_cmpabs(a.lower(), a.upper()) > 0) {
    mpfr_neg(r.upper(), a.lower(), MPFR_RNDU);
  } else {
    mpfr_set(r.upper(), a.upper(), MPFR_RNDU);
  }
  return r;
}

Interval sqrt(const Interval& a) {
  if (a.negative()) throw DomainError("sqrt of a negative value");
  if (mpfr_sgn(a.lower()) < 0) throw InsufficientPrecision("sqrt argument straddles zero");
  Interval r(a.precision());
  mpfr_sqrt(r.lower(), a.lower(), MPFR_RNDD);
  mpfr_sqrt(r.upper(), a.upper(), MPFR_RNDU);
  return r;
}

Interval log(const Interval& a) {
  if (mpfr_sgn(a.upper()) <= 0) throw DomainError("log of a non-positive value");
  if (mpfr_sgn(a.lower()) <= 0) throw InsufficientPrecision("log argument straddles zero");
  Interval r(a.precision());
  mpfr_log(r.lower(), a.lower(), MPFR_RNDD);
  mpfr_log(r.upper(), a.upper(), MPFR_RNDU);
  return r;
}

Interval log10(const Interval& a) {
  if (mpfr_sgn(a.upper()) <= 0) throw DomainError("log10 of a non-positive value");
  if (mpfr_sgn(a.lower()) <= 0) throw InsufficientPrecision("log10 argument straddles zero");
  Interval r(a.precision());
  mpfr_log10(r.lower(), a.lower(), MPFR_RNDD);
  mpfr_log10(r.upper(), a.upper(), MPFR_RNDU);
  return r;
}

Interval pow(const Interval& a, long exponent) {
  const long prec = a.precision();
  if (exponent == 0) return Interval::exact(BigNat(1), prec);
  if (exponent < 0) {
    if (a.positive()) {
      Interval r(prec);
      mpfr_pow_si(r.lower(), a.upper(), exponent, MPFR_RNDD);
      mpfr_pow_si(r.upper(), a.lower(), exponent, MPFR_RNDU);
      return r;
    }
    return Interval::exact(BigNat(1), prec) / pow(a, -exponent);
  }
  Interval r(prec);
  if (exponent % 2 == 1 || mpfr_sgn(a.lower()) >= 0) {
    mpfr_pow_si(r.lower(), a.lower(), exponent, MPFR_RNDD);
    mpfr_pow_si(r.upper(), a.upper(), exponent, MPFR_RNDU);
  } else if (mpfr_sgn(a.upper()) <= 0) {
    mpfr_pow_si(r.lower(), a.upper(), exponent, MPFR_RNDD);
    mpfr_pow_si(r.upper(), a.lower(), exponent, MPFR_RNDU);
  } else {
    mpfr_set_zero(r.lower(), 1);
    Scratch t(prec);
    mpfr_pow_si(r.upper(), a.lower(), exponent, MPFR_RNDU);
    mpfr_pow_si(t.v, a.upper(), exponent, MPFR_RNDU);
    if (mpfr_greater_p(t.v, r.upper())) mpfr_set(r.upper(), t.v, MPFR_RNDU);
  }
  return r;
}

Interval sqrt5_interval(long precision_bits) { return sqrt(Interval::exact(BigNat(5), precision_bits)); }

Interval alpha_interval(long precision_bits) {
  return (Interval::exact(BigNat(1), precision_bits) + sqrt5_interval(precision_bits)) /
         Interval::exact(BigNat(2), precision_bits);
}

Interval distance_to_nearest_integer(const Interval& a) {
  const long prec = a.precision();
  // floor of a p-bit float fits in p bits
  Scratch flo(prec), fhi(prec);
  mpfr_floor(flo.v, a.lower());
  mpfr_floor(fhi.v, a.upper());
  Interval r(prec);
  Scratch t(prec + 2);
  Scratch half(prec);
  mpfr_set_d(half.v, 0.5, MPFR_RNDN);

  if (mpfr_equal_p(flo.v, fhi.v)) {
    Scratch mid(prec + 2);
    mpfr_add(mid.v, flo.v, half.v, MPFR_RNDN);  // exact: prec + 2 bits suffice
    if (mpfr_lessequal_p(a.upper(), mid.v)) {
      mpfr_sub(r.lower(), a.lower(), flo.v, MPFR_RNDD);
      mpfr_sub(r.upper(), a.upper(), flo.v, MPFR_RNDU);
    } else if (mpfr_greaterequal_p(a.lower(), mid.v)) {
      Scratch ceil_v(prec + 2);
      mpfr_add_ui(ceil_v.v, flo.v, 1, MPFR_RNDN);
      mpfr_sub(r.lower(), ceil_v.v, a.upper(), MPFR_RNDD);
      mpfr_sub(r.upper(), ceil_v.v, a.lower(), MPFR_RNDU);
    } else {
      Scratch ceil_v(prec + 2);
      mpfr_add_ui(ceil_v.v, flo.v, 1, MPFR_RNDN);
      mpfr_sub(r.lower(), a.lower(), flo.v, MPFR_RNDD);
      mpfr_sub(t.v, ceil_v.v, a.upper(), MPFR_RNDD);
      if (mpfr_less_p(t.v, r.lower())) mpfr_set(r.lower(), t.v, MPFR_RNDD);
      mpfr_set(r.upper(), half.v, MPFR_RNDU);
    }
    return r;
  }
  // [lower, upper] contains the integer floor(upper)
  mpfr_set_zero(r.lower(), 1);
  Scratch up(prec + 2);
  mpfr_sub(up.v, fhi.v, a.lower(), MPFR_RNDU);
  mpfr_sub(t.v, a.upper(), fhi.v, MPFR_RNDU);
  if (mpfr_greater_p(t.v, up.v)) mpfr_set(up.v, t.v, MPFR_RNDU);
  if (mpfr_greater_p(up.v, half.v)) mpfr_set(up.v, half.v, MPFR_RNDU);
  mpfr_set(r.upper(), up.v, MPFR_RNDU);
  return r;
}

}  // namespace concat
