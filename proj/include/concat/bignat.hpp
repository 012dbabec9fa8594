#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace concat {

// Arbitrary-size integers. BigNat holds non-negative values by convention;
// signed intermediate results use the same type.
using BigNat = mpz_class;
using Rational = mpq_class;

std::string to_decimal(const BigNat& v);
BigNat parse_bignat(std::string_view text);

BigNat pow10(std::uint64_t exponent);

// Exact parse of "123", "-7", "22/7", "4.5e16", "0.00034", "1.7E12".
Rational parse_rational(std::string_view text);

// "p/q" in lowest terms, or just "p" for integers.
std::string to_fraction_string(const Rational& r);

// Scientific rendering with `digits` significant figures, e.g. "4.5e16". Rounds to nearest.
std::string to_scientific(const Rational& r, int digits = 3);

// Smallest value of the form c·10^e with `digits` significant figures that is >= r (r > 0).
BigNat round_up_significant(const Rational& r, int digits);

// Largest decimal with `digits` significant figures that is <= r (r > 0), as an exact rational.
Rational round_down_significant(const Rational& r, int digits);

std::size_t bit_length(const BigNat& v);

}  // namespace concat
