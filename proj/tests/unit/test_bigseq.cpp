#include "doctest.h"

#include "concat/bigseq.hpp"
#include "concat/bignat.hpp"
#include "concat/errors.hpp"
#include "concat/qsqrt5.hpp"

using namespace concat;

TEST_SUITE("bigseq") {
  TEST_CASE("small values") {
    const long F[] = {0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55};
    const long L[] = {2, 1, 3, 4, 7, 11, 18, 29, 47, 76, 123};
    for (int i = 0; i <= 10; ++i) {
      CHECK(fib(i) == F[i]);
      CHECK(lucas(i) == L[i]);
    }
    CHECK(to_decimal(fib(100)) == "354224848179261915075");
    CHECK(to_decimal(lucas(100)) == "792070839848372253127");
    CHECK(term(Sequence::Lucas, 5) == 11);
    CHECK(fibonacci_table().at(90) == fib(90));
  }

  TEST_CASE("Lucas identity and doubling") {
    for (SeqIndex k = 1; k <= 1000; ++k) REQUIRE(lucas(k) == fib(k + 1) + fib(k - 1));
    for (SeqIndex n = 1; n <= 300; ++n) REQUIRE(fib(2 * n) == fib(n) * lucas(n));
  }

  TEST_CASE("Binet bounds, exact in Q(sqrt5)") {
    // alpha^(n-2) <= F_n <= alpha^(n-1), alpha^(n-1) <= L_n <= 2 alpha^n
    for (long n = 1; n <= 1000; ++n) {
      const QSqrt5 f(Rational(fib(static_cast<SeqIndex>(n))));
      const QSqrt5 l(Rational(lucas(static_cast<SeqIndex>(n))));
      REQUIRE((f - alpha_power(n - 2)).sign() >= 0);
      REQUIRE((alpha_power(n - 1) - f).sign() >= 0);
      REQUIRE((l - alpha_power(n - 1)).sign() >= 0);
      REQUIRE((QSqrt5(2) * alpha_power(n) - l).sign() >= 0);
    }
  }

  TEST_CASE("digit counts") {
    CHECK_THROWS(digit_count(BigNat(0)));
    CHECK(digit_count(BigNat(1)) == 1);
    CHECK(digit_count(BigNat(9)) == 1);
    CHECK(digit_count(BigNat(10)) == 2);
    CHECK(digit_count(pow10(50)) == 51);
    CHECK(digit_count(pow10(50) - 1) == 50);
    for (SeqIndex k = 2; k <= 2000; ++k) {
      REQUIRE(digit_bounds_fib(k).strictly_contains(digit_count(fib(k))));
      REQUIRE(digit_bounds_lucas(k).strictly_contains(digit_count(lucas(k))));
    }
    const auto b1 = digit_bounds_fib(1);
    CHECK(b1.lo < 1);
    CHECK(Rational(1) <= b1.hi);
  }

  TEST_CASE("Pisano periods") {
    CHECK(pisano_period(2) == 3);
    CHECK(pisano_period(5) == 20);
    CHECK(pisano_period(10) == 60);
    CHECK(pisano_period(1000) == 1500);
    CHECK_THROWS_AS(pisano_period(1), std::invalid_argument);
  }

  TEST_CASE("residue classes mod 5") {
    CHECK(residue_class_excludes(4, 5));
    CHECK(residue_class_excludes(8, 5));
    CHECK_FALSE(residue_class_excludes(20, 5));
    CHECK_THROWS_AS(residue_class_excludes(0, 5), std::invalid_argument);
    CHECK_FALSE(residue_class_excludes(1, 5));
  }
}
