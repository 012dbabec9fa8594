#pragma once

#include <mpfr.h>

#include <string>

#include "concat/bignat.hpp"

namespace concat {

// Closed interval [lower, upper] with MPFR (dyadic) endpoints. Every operation rounds
// outward, so the exact real result of the operation on any members lies inside.
class Interval {
 public:
  explicit Interval(long precision_bits);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  static Interval exact(const BigNat& v, long precision_bits);
  static Interval exact(const Rational& v, long precision_bits);
  static Interval hull(const Rational& lo, const Rational& hi, long precision_bits);

  long precision() const { return precision_; }
  mpfr_srcptr lower() const { return lo_; }
  mpfr_srcptr upper() const { return hi_; }
  mpfr_ptr lower() { return lo_; }
  mpfr_ptr upper() { return hi_; }

  bool is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }
  bool positive() const { return mpfr_sgn(lo_) > 0; }
  bool negative() const { return mpfr_sgn(hi_) < 0; }
  bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
  bool contains(const Rational& x) const;
  bool overlaps(const Interval& other) const;
  bool subset_of(const Interval& other) const;

  Rational lower_rational() const;
  Rational upper_rational() const;
  Rational width_rational() const;
  double lower_double() const;
  double upper_double() const;
  // Exponent e with width <= 2^e; a very negative number for point intervals.
  long width_log2() const;

  std::string lower_decimal(int digits = 0) const;
  std::string upper_decimal(int digits = 0) const;

 private:
  long precision_;
  mpfr_t lo_;
  mpfr_t hi_;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);

Interval abs(const Interval& a);
Interval sqrt(const Interval& a);
Interval log(const Interval& a);
Interval log10(const Interval& a);
Interval pow(const Interval& a, long exponent);

Interval alpha_interval(long precision_bits);
Interval sqrt5_interval(long precision_bits);

// Interval containing ||x|| (distance to the nearest integer) for every x in `a`.
// The lower end is 0 when `a` contains an integer.
Interval distance_to_nearest_integer(const Interval& a);

}  // namespace concat
