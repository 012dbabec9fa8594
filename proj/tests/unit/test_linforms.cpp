#include "doctest.h"

#include "concat/linforms.hpp"
#include "concat/search.hpp"

using namespace concat;

namespace {

bool near(const Expr& e, const char* value, const char* tol = "1e-30") {
  const Interval iv = eval(e, 256);
  const Rational v = parse_rational(value), t = parse_rational(tol);
  return iv.lower_rational() > v - t && iv.upper_rational() < v + t;
}

Expr lit(const char* s) { return Expr(parse_rational(s)); }

}  // namespace

TEST_SUITE("linforms") {
  TEST_CASE("heights of the basic numbers") {
    CHECK(near(height(AlgElem::integer(10), HeightMode::Exact).value, "2.302585092994045684017991454684364"));
    CHECK(near(height(AlgElem::alpha(), HeightMode::Exact).value, "0.2406059125298017237488794567121842115676"));
    CHECK(near(height(AlgElem::sqrt5(), HeightMode::Exact).value, "0.8047189562170501873003796666130938197628"));
    CHECK(near(height(AlgElem::rational(Rational(3, 7)), HeightMode::Exact).value, "1.945910149055313305105352743443179729637"));
    // rule bound never undercuts the exact height
    const AlgElem e = AlgElem::fib(9) * AlgElem::sqrt5() / (AlgElem::integer(1) - pow(AlgElem::alpha(), -6) * AlgElem::sqrt5());
    CHECK(compare(height(e, HeightMode::Exact).value, height(e, HeightMode::Rules).value * Expr(Rational(1000001, 1000000))) ==
          Ordering::Less);
    CHECK_FALSE(height(e, HeightMode::Rules).trace.empty());
  }

  TEST_CASE("Matveev coefficients sit just below the printed values") {
    for (LambdaKind kind : {LambdaKind::L1, LambdaKind::L2, LambdaKind::L3, LambdaKind::L4}) {
      const LambdaFamily& fam = lambda_family(kind);
      CAPTURE(fam.name);
      const Interval c = eval(family_coefficient(fam), 256);
      const Rational printed = parse_rational(fam.printed_coefficient);
      CHECK(c.upper_rational() <= printed);
      CHECK(c.lower_rational() >= printed * Rational(995, 1000));
    }
    CHECK(lambda_family(LambdaKind::L1).printed_coefficient == "2.41e10");
    CHECK(lambda_family(LambdaKind::L2).printed_coefficient == "2.24e12");
    CHECK(lambda_family(LambdaKind::L3).printed_coefficient == "7.19e12");
  }

  TEST_CASE("linear forms at the known solutions are small and nonzero") {
    int checked = 0;
    for (Equation eq : {Equation::FibLucas, Equation::LucasFib}) {
      for (const auto& r : search_range(eq, 30, 30)) {
        if (r.degenerate) continue;
        const LambdaKind kinds[2] = {eq == Equation::FibLucas ? LambdaKind::L1 : LambdaKind::L3,
                                     eq == Equation::FibLucas ? LambdaKind::L2 : LambdaKind::L4};
        for (LambdaKind kind : kinds) {
          const LambdaFamily& fam = lambda_family(kind);
          LinearFormInstance inst;
          try {
            inst = lambda_instance(kind, {r.n, r.m, r.k});
          } catch (const SideConditionViolated&) {
            continue;
          }
          const QSqrt5 v = lambda_value(inst);
          REQUIRE_FALSE(v.is_zero());
          const long W = fam.side == SmallSide::TwoK ? 2 * static_cast<long>(r.k)
                                                     : static_cast<long>(r.n - r.k) - fam.offset;
          const Expr lhs = abs(Expr(v.rational_part()) + Expr(v.sqrt5_part()) * Expr::sqrt5());
          CHECK(certainly_less(lhs, Expr(fam.tail_numerator) / pow(Expr::alpha(), W)));
          ++checked;
        }
      }
    }
    CHECK(checked >= 4);
  }

  TEST_CASE("side conditions") {
    CHECK_THROWS_AS(lambda_instance(LambdaKind::L1, {5, 1, 2}), SideConditionViolated);  // n-k = 3 < 4
    CHECK_THROWS_AS(lambda_instance(LambdaKind::L4, {8, 0, 0}), SideConditionViolated);  // k = 0
    const auto inst = lambda_instance(LambdaKind::L2, {40, 10, 20});
    CHECK(inst.t == 3);
    CHECK(inst.field_degree == 2);
    CHECK(inst.B == 40);
  }

  TEST_CASE("printed bounds reproduced from the printed coefficients") {
    struct Row {
      const char* name;
      BoundInequality ineq;
      const char* printed;
    };
    const AffineA& a2 = lambda_family(LambdaKind::L2).A.back();
    const AffineA& a4 = lambda_family(LambdaKind::L4).A.back();
    const Row rows[] = {
        {"shift, first equation", shift_bound_inequality(lit("2.41e10"), 7, "shift"), "8e11"},
        {"chained, first equation", chained_bound_inequality(lit("2.24e12"), a2, 7, lit("2.41e10"), 8, "chain"), "7e26"},
        {"refined, first equation", refined_bound_inequality(lit("2.24e12"), a2, 157, 8, "refined"), "4.5e16"},
        {"chained, second equation", chained_bound_inequality(lit("2.24e12"), a4, 6, lit("7.19e12"), 8, "chain"), "2.5e29"},
        {"refined, second equation", refined_bound_inequality(lit("2.24e12"), a4, 175, 8, "refined"), "4.6e16"},
    };
    for (const auto& row : rows) {
      CAPTURE(row.name);
      const SolvedBound b = solve_bound(row.ineq);
      const Rational printed = parse_rational(row.printed);
      CHECK(Rational(b.bound) <= printed);
      CHECK(b.tight_upper <= Rational(b.bound));
      CHECK(printed < 10 * b.tight_upper);
      CHECK(b.holds_below);
    }
    // k <= m branch of the first equation: n < 2(n-k) + 8
    const SolvedBound s = solve_bound(shift_bound_inequality(lit("2.41e10"), 7, "shift"));
    CHECK(Rational(2 * s.bound + 8) <= parse_rational("1.7e12"));
  }

  TEST_CASE("bounds fail only at the root") {
    const SolvedBound b = solve_bound(shift_bound_inequality(Expr(100L), 0, "X < 100 (1 + log X)"));
    // X = 100 (1 + log X) at X = 763.835206799...; the enclosure is est (1 + 1e-9) + 1
    CHECK(b.tight_upper > parse_rational("763.8352067993"));
    CHECK(b.tight_upper < parse_rational("764.8352076"));
    CHECK(b.bound == 770);
  }
}
