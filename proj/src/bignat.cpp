#include "concat/bignat.hpp"

#include <cctype>
#include <stdexcept>

#include "concat/errors.hpp"

namespace concat {

std::string to_decimal(const BigNat& v) { return v.get_str(10); }

BigNat parse_bignat(std::string_view text) {
  if (text.empty()) throw ParseError("empty integer");
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("not a non-negative integer: " + std::string(text));
  }
  return BigNat(std::string(text), 10);
}

BigNat pow10(std::uint64_t exponent) {
  BigNat r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, exponent);
  return r;
}

namespace {

BigNat pow10_signed_num(long e) { return e >= 0 ? pow10(static_cast<std::uint64_t>(e)) : BigNat(1); }
BigNat pow10_signed_den(long e) { return e < 0 ? pow10(static_cast<std::uint64_t>(-e)) : BigNat(1); }

Rational pow10_rational(long e) {
  Rational r(pow10_signed_num(e), pow10_signed_den(e));
  r.canonicalize();
  return r;
}

// e such that 10^e <= r < 10^(e+1), for r > 0.
long decimal_exponent(const Rational& r) {
  const long num_digits = static_cast<long>(mpz_sizeinbase(r.get_num_mpz_t(), 10));
  const long den_digits = static_cast<long>(mpz_sizeinbase(r.get_den_mpz_t(), 10));
  long e = num_digits - den_digits;
  while (pow10_rational(e) > r) --e;
  while (pow10_rational(e + 1) <= r) ++e;
  return e;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty number");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational r;
    try {
      r = Rational(BigNat(s.substr(0, slash), 10), BigNat(s.substr(slash + 1), 10));
    } catch (const std::invalid_argument&) {
      throw ParseError("bad fraction: " + s);
    }
    if (r.get_den() == 0) throw ParseError("zero denominator: " + s);
    r.canonicalize();
    return r;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = s[pos] == '-';
    ++pos;
  }
  std::string digits;
  long scale = 0;
  bool any_digit = false;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    digits += s[pos++];
    any_digit = true;
  }
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      digits += s[pos++];
      --scale;
      any_digit = true;
    }
  }
  if (!any_digit) throw ParseError("not a number: " + s);
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    std::size_t used = 0;
    long exp = 0;
    try {
      exp = std::stol(s.substr(pos), &used);
    } catch (const std::exception&) {
      throw ParseError("bad exponent: " + s);
    }
    pos += used;
    scale += exp;
  }
  if (pos != s.size()) throw ParseError("trailing characters in number: " + s);
  Rational r(BigNat(digits, 10));
  r *= pow10_rational(scale);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::string to_fraction_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str(10);
  return r.get_num().get_str(10) + "/" + r.get_den().get_str(10);
}

std::string to_scientific(const Rational& r, int digits) {
  if (digits < 1) throw std::invalid_argument("to_scientific: digits must be positive");
  if (r == 0) return "0";
  Rational a = abs(r);
  long e = decimal_exponent(a);
  Rational scaled = a * pow10_rational(digits - 1 - e);
  // round half up
  BigNat m = BigNat(scaled.get_num() * 2 + scaled.get_den()) / BigNat(scaled.get_den() * 2);
  if (m == pow10(static_cast<std::uint64_t>(digits))) {
    m /= 10;
    ++e;
  }
  std::string mant = m.get_str(10);
  std::string out = mant.substr(0, 1);
  std::string frac = mant.substr(1);
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (!frac.empty()) out += "." + frac;
  out += "e" + std::to_string(e);
  return (r < 0 ? "-" : "") + out;
}

BigNat round_up_significant(const Rational& r, int digits) {
  if (r <= 0) throw std::invalid_argument("round_up_significant: value must be positive");
  const long e = decimal_exponent(r);
  const long shift = e - digits + 1;
  if (shift <= 0) {
    BigNat c;
    mpz_cdiv_q(c.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return c;
  }
  Rational scaled = r / pow10_rational(shift);
  BigNat c;
  mpz_cdiv_q(c.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  return c * pow10(static_cast<std::uint64_t>(shift));
}

Rational round_down_significant(const Rational& r, int digits) {
  if (r <= 0) throw std::invalid_argument("round_down_significant: value must be positive");
  const long e = decimal_exponent(r);
  const long shift = e - digits + 1;
  Rational scaled = r / pow10_rational(shift);
  BigNat f;
  mpz_fdiv_q(f.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  Rational out = Rational(f) * pow10_rational(shift);
  out.canonicalize();
  return out;
}

std::size_t bit_length(const BigNat& v) {
  if (v == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

}  // namespace concat
