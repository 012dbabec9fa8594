#include "concat/qsqrt5.hpp"

#include <stdexcept>

#include "concat/bigseq.hpp"
#include "concat/errors.hpp"

namespace concat {

QSqrt5::QSqrt5(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
  a_.canonicalize();
  b_.canonicalize();
}

int QSqrt5::sign() const {
  // sign(a + b r) with r = sqrt5: compare a^2 and 5 b^2 when signs differ
  const int sa = sgn(a_);
  const int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  const int c = cmp(a_ * a_, 5 * b_ * b_);
  if (c == 0) return 0;  // unreachable for rationals, kept for completeness
  return c > 0 ? sa : sb;
}

QSqrt5 QSqrt5::inverse() const {
  const Rational n = norm();
  if (n == 0) throw DomainError("QSqrt5: inverse of zero");
  return {a_ / n, -b_ / n};
}

std::string QSqrt5::to_string() const {
  return to_fraction_string(a_) + " + " + to_fraction_string(b_) + "*sqrt5";
}

QSqrt5 pow(const QSqrt5& x, long exponent) {
  if (exponent < 0) return pow(x.inverse(), -exponent);
  QSqrt5 result(1);
  QSqrt5 base = x;
  auto e = static_cast<unsigned long>(exponent);
  while (e) {
    if (e & 1UL) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

QSqrt5 alpha_power(long exponent) {
  const auto n = static_cast<SeqIndex>(exponent < 0 ? -exponent : exponent);
  QSqrt5 p(Rational(lucas(n), 2), Rational(fib(n), 2));
  // alpha^{-n} = (-1)^n beta^n = (-1)^n (L_n - F_n sqrt5)/2
  if (exponent < 0) {
    p = p.conjugate();
    if (n % 2 == 1) p = -p;
  }
  return p;
}

}  // namespace concat
