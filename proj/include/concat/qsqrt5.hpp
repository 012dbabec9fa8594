#pragma once

#include <string>

#include "concat/bignat.hpp"

namespace concat {

// Exact element a + b·sqrt5 of Q(sqrt5).
class QSqrt5 {
 public:
  QSqrt5() = default;
  QSqrt5(Rational a, Rational b = 0);  // NOLINT

  static QSqrt5 sqrt5() { return {0, 1}; }
  static QSqrt5 alpha() { return {Rational(1, 2), Rational(1, 2)}; }
  static QSqrt5 beta() { return {Rational(1, 2), Rational(-1, 2)}; }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt5_part() const { return b_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }

  QSqrt5 conjugate() const { return {a_, -b_}; }
  Rational norm() const { return a_ * a_ - 5 * b_ * b_; }
  Rational trace() const { return 2 * a_; }
  // Sign of the real embedding with sqrt5 > 0: -1, 0, +1. Exact.
  int sign() const;

  QSqrt5 inverse() const;

  friend QSqrt5 operator+(const QSqrt5& x, const QSqrt5& y) { return {x.a_ + y.a_, x.b_ + y.b_}; }
  friend QSqrt5 operator-(const QSqrt5& x, const QSqrt5& y) { return {x.a_ - y.a_, x.b_ - y.b_}; }
  friend QSqrt5 operator-(const QSqrt5& x) { return {-x.a_, -x.b_}; }
  friend QSqrt5 operator*(const QSqrt5& x, const QSqrt5& y) {
    return {x.a_ * y.a_ + 5 * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_};
  }
  friend QSqrt5 operator/(const QSqrt5& x, const QSqrt5& y) { return x * y.inverse(); }
  friend bool operator==(const QSqrt5& x, const QSqrt5& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
  friend bool operator!=(const QSqrt5& x, const QSqrt5& y) { return !(x == y); }

  std::string to_string() const;

 private:
  Rational a_ = 0;
  Rational b_ = 0;
};

QSqrt5 pow(const QSqrt5& x, long exponent);
// alpha^e for any integer e, computed via Fibonacci/Lucas numbers: alpha^n = (L_n + F_n sqrt5)/2.
QSqrt5 alpha_power(long exponent);

}  // namespace concat
