#include "doctest.h"

#include "concat/contfrac.hpp"
#include "concat/errors.hpp"

using namespace concat;

namespace {

std::vector<long> first_quotients(const ContinuedFraction& cf, std::size_t n) {
  std::vector<long> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(cf.a(i).get_si());
  return out;
}

}  // namespace

TEST_SUITE("contfrac") {
  TEST_CASE("tau and its inverse") {
    const auto inv = tau_inverse(40);
    CHECK(first_quotients(*inv, 5) == std::vector<long>{0, 4, 1, 3, 1});
    const auto t = tau(40);
    CHECK(first_quotients(*t, 4) == std::vector<long>{4, 1, 3, 1});
    for (std::size_t i = 2; i <= 39; ++i) REQUIRE(inv->a(i + 1) == t->a(i));
  }

  TEST_CASE("classical numbering of the tau denominators") {
    const auto t = tau(100);
    CHECK(to_decimal(t->classical_q(60)) == "2568762252997982327345614176552");
    CHECK(t->q(61) == t->classical_q(60));
    CHECK(t->q(1) == 1);
  }

  TEST_CASE("largest partial quotient below 7e26") {
    const auto inv = tau_inverse(80);
    const auto mx = max_partial_quotient(*inv, parse_rational("7e26").get_num());
    CHECK(mx.value == 106);
    CHECK(mx.index == 37);
    CHECK(mx.range_end == 54);
    CHECK(inv->q(54) <= parse_bignat("700000000000000000000000000"));
    CHECK(inv->q(55) > parse_bignat("700000000000000000000000000"));
  }

  TEST_CASE("first denominator exceeding a bound") {
    const auto t = tau(80);
    const auto r = first_denominator_exceeding(*t, 6 * parse_bignat("45000000000000000"));
    CHECK(r.index == 37);
    CHECK(to_decimal(r.q) == "407740167162609043");
    CHECK(t->q(r.index - 1) <= 6 * parse_bignat("45000000000000000"));
  }

  TEST_CASE("convergent recurrence, coprimality and alternation") {
    const auto t = tau(200);
    REQUIRE(t->size() >= 200);
    const Expr x = tau_expr();
    for (std::size_t i = 1; i <= 200; ++i) {
      const BigNat p2 = i >= 3 ? t->p(i - 2) : (i == 2 ? BigNat(1) : BigNat(0));
      const BigNat q2 = i >= 3 ? t->q(i - 2) : (i == 2 ? BigNat(0) : BigNat(1));
      const BigNat p1 = i >= 2 ? t->p(i - 1) : BigNat(1);
      const BigNat q1 = i >= 2 ? t->q(i - 1) : BigNat(0);
      REQUIRE(t->p(i) == t->a(i) * p1 + p2);
      REQUIRE(t->q(i) == t->a(i) * q1 + q2);
      BigNat g;
      mpz_gcd(g.get_mpz_t(), t->p(i).get_mpz_t(), t->q(i).get_mpz_t());
      REQUIRE(g == 1);
      if (i >= 2) {
        const BigNat det = t->p(i) * t->q(i - 1) - t->p(i - 1) * t->q(i);
        REQUIRE(det == ((i % 2 == 0) ? 1 : -1));
      }
      // odd library index: below the target
      const bool below = compare(Expr(Rational(t->p(i), t->q(i))), x) == Ordering::Less;
      REQUIRE(below == (i % 2 == 1));
    }
  }

  TEST_CASE("rational targets terminate") {
    const ContinuedFraction cf = expand(Expr(Rational(355, 113)), 10);
    CHECK(cf.terminated());
    CHECK(first_quotients(cf, cf.size()) == std::vector<long>{3, 7, 16});
    CHECK(cf.p(cf.size()) == 355);
    CHECK(cf.q(cf.size()) == 113);
  }

  TEST_CASE("Legendre location") {
    const auto inv = tau_inverse(40);
    // a_37 = 106, so p_36/q_36 is within 1/(106 q^2) of the target
    const auto hit = legendre_locate(tau_inverse_expr(), inv->p(36), inv->q(36));
    REQUIRE(std::holds_alternative<IsConvergent>(hit));
    CHECK(std::get<IsConvergent>(hit).index == 36);
    CHECK(std::holds_alternative<NotClose>(legendre_locate(tau_inverse_expr(), BigNat(1), BigNat(7))));
  }

  TEST_CASE("approximation floor") {
    const auto inv = tau_inverse(80);
    const BigNat bound = parse_rational("7e26").get_num();
    const BigNat q = inv->q(30);
    const Rational f = approximation_floor(*inv, q, bound);
    CHECK(f == Rational(BigNat(1), 108 * q * q));
    // the floor holds at the convergent itself
    const Interval gap = eval(abs(tau_inverse_expr() - Expr(Rational(inv->p(30), q))), 512);
    CHECK(gap.lower_rational() > f);
  }
}
