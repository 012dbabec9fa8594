#include "doctest.h"

#include "../support/random_expr.hpp"
#include "concat/errors.hpp"
#include "concat/interval.hpp"
#include "concat/realexpr.hpp"

using namespace concat;

TEST_SUITE("realexpr") {
  TEST_CASE("constants enclose known digits") {
    const Interval a = eval(Expr::alpha(), 200);
    CHECK(a.lower_rational() > parse_rational("1.61803398874989484820458683436563811772"));
    CHECK(a.upper_rational() < parse_rational("1.61803398874989484820458683436563811773"));
    const Interval l = eval(log(Expr(10L)), 200);
    CHECK(l.lower_rational() > parse_rational("2.3025850929940456840179914546843642076"));
    CHECK(l.upper_rational() < parse_rational("2.3025850929940456840179914546843642077"));
    CHECK(eval(Expr::beta(), 128).negative());
    CHECK(eval(Expr::sqrt5() * Expr::sqrt5(), 128).contains(Rational(5)));
    CHECK(eval(Expr::alpha(), 512).width_log2() < -500);
  }

  TEST_CASE("parse and print round trip") {
    const char* texts[] = {"(div (log 10) (log alpha))", "(add (mul 2 (log 10)) (mul 3 (log alpha)))",
                           "(sub 1 (mul (pow alpha -4) sqrt5))", "(neg 22/7)", "(sqrt (abs (log10 beta)))"};
    for (const char* t : texts) {
      const Expr e = parse_expr(t);
      CHECK(parse_expr(e.to_string()).to_string() == e.to_string());
    }
    CHECK(exact_rational(parse_expr("4.5e16")) == Rational(45000000000000000L));
    CHECK(exact_rational(parse_expr("0.00034")) == Rational(17, 50000));
    CHECK_THROWS_AS(parse_expr("(add 1"), ParseError);
    CHECK_THROWS_AS(parse_expr("(frob 1 2)"), ParseError);
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(eval(log(Expr(-1L)), 64), DomainError);
    CHECK_THROWS_AS(eval(Expr(1L) / Expr(0L), 64), DomainError);
    CHECK_THROWS_AS(eval(sqrt(Expr(-2L)), 64), DomainError);
    CHECK_THROWS_AS(eval(Expr(1L), 8), std::invalid_argument);
  }

  TEST_CASE("certified comparison") {
    CHECK(compare(log(Expr(10L)) / log(Expr::alpha()), Expr(Rational(4785, 1000))) == Ordering::Less);
    CHECK(compare(log(Expr(10L)) / log(Expr::alpha()), Expr(Rational(4784, 1000))) == Ordering::Greater);
    CHECK(certainly_less(Expr::alpha() * Expr::alpha(), Expr::alpha() + Expr(Rational(10001, 10000))));
    // alpha^2 = alpha + 1 exactly: no finite precision separates them
    CHECK_THROWS_AS(compare(Expr::alpha() * Expr::alpha(), Expr::alpha() + Expr(1L), 1024), PrecisionExhausted);
  }

  TEST_CASE("nearest integer distance") {
    const Interval d = nearest_integer_distance(Expr(Rational(7, 3)));
    CHECK(d.contains(Rational(1, 3)));
    const Interval z = nearest_integer_distance(Expr(5L));
    CHECK(z.contains(Rational(0)));
    // alpha^20 = (L_20 + F_20 sqrt5)/2 sits 1/alpha^20 from L_20 = 15127
    const Interval e = nearest_integer_distance(pow(Expr::alpha(), 20));
    CHECK(e.overlaps(eval(pow(Expr::alpha(), -20), 256)));
    CHECK(e.upper_rational() < Rational(1, 15000));
  }

  TEST_CASE("rational expressions contain their exact value") {
    concat::testing::ExprGen gen(7);
    for (int i = 0; i < 2000; ++i) {
      const Expr e = gen.rational(5);
      const auto exact = exact_rational(e);
      REQUIRE(exact);
      for (long bits : {16L, 53L, 200L}) REQUIRE(eval(e, bits).contains(*exact));
    }
  }

  TEST_CASE("higher precision nests inside lower precision") {
    concat::testing::ExprGen gen(11);
    int evaluated = 0;
    for (int i = 0; evaluated < 2000; ++i) {
      const Expr e = gen.any(4);
      try {
        const Interval lo = eval(e, 64);
        const Interval hi = eval(e, 256);
        REQUIRE(hi.subset_of(lo));
        ++evaluated;
      } catch (const DomainError&) {
      }
    }
    CHECK(evaluated == 2000);
  }
}
