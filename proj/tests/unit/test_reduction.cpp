#include "doctest.h"

#include "../support/reduction_oracle.hpp"
#include "concat/contfrac.hpp"
#include "concat/reduction.hpp"

using namespace concat;

namespace {

const char* kMuFirst = "(div (log (div (mul (fib {m}) sqrt5) (sub 1 (mul (pow alpha -{s}) sqrt5)))) (log alpha))";
const char* kMuSecond = "(div (log (div (mul (lucas {m}) sqrt5) (sub 1 (pow alpha -{s})))) (log alpha))";

ReductionProblem shared(const char* M, long A) {
  return {parse_rational(M).get_num(), tau_expr(), Expr(0L), Expr(A) / log(Expr::alpha()), Expr::alpha(), "test"};
}

}  // namespace

TEST_SUITE("reduction") {
  TEST_CASE("single point of the first sweep") {
    auto p = shared("4.5e16", 14);
    p.mu = mu_from_template(kMuFirst, 50, 20);
    const auto cf = tau(80);
    const auto o = reduce(p, *cf, 61);
    REQUIRE(std::holds_alternative<Reduced>(o));
    const auto& r = std::get<Reduced>(o);
    CHECK(r.epsilon_lower >= parse_rational("0.00034"));
    CHECK(r.epsilon_lower < parse_rational("0.000341"));
    CHECK(r.w_bound == 170);
    CHECK(to_decimal(r.q) == "2568762252997982327345614176552");
  }

  TEST_CASE("constant mu reduction for the second equation") {
    ReductionProblem p{parse_rational("2.5e29").get_num(), tau_expr(), log(Expr::sqrt5()) / log(Expr::alpha()),
                       Expr(6L) / log(Expr::alpha()), Expr::alpha(), "constant mu"};
    const auto o = reduce(p, *tau(80), 61);
    REQUIRE(std::holds_alternative<Reduced>(o));
    const auto& r = std::get<Reduced>(o);
    CHECK(r.epsilon_lower > parse_rational("0.017775"));
    CHECK(r.w_bound == 160);
  }

  TEST_CASE("defaults and preconditions") {
    auto p = shared("4.5e16", 14);
    p.mu = mu_from_template(kMuFirst, 50, 20);
    const auto cf = tau(80);
    const auto o = reduce(p, *cf);
    REQUIRE(std::holds_alternative<Reduced>(o));
    CHECK(std::get<Reduced>(o).q_index == 37);  // first q above 6M
    CHECK_THROWS(reduce(p, *cf, 20));           // q_20 <= 6M
    auto zero = shared("1000", 2);
    const auto z = reduce(zero, *cf);
    CHECK(std::holds_alternative<EpsilonNonpositive>(z));
    auto bad = zero;
    bad.B = Expr(1L);
    CHECK_THROWS(reduce(bad, *cf));
  }

  TEST_CASE("congruence exclusion") {
    const auto e4 = exclude_by_congruence(4);
    REQUIRE(std::holds_alternative<Excluded>(e4));
    CHECK(std::get<Excluded>(e4).reason == "F_t != F_{t+4} mod 5 over full period 20");
    CHECK(std::holds_alternative<Excluded>(exclude_by_congruence(8)));
    CHECK_THROWS_AS(exclude_by_congruence(20), NotExcludable);
    CHECK_THROWS_AS(exclude_by_congruence(1), NotExcludable);
  }

  TEST_CASE("grids") {
    const auto tri = triangular_grid(1, 3, 4, 8);
    CHECK(tri.size() == 5 + 6 + 7);
    CHECK(tri.front().m == 1);
    CHECK(tri.front().s == 4);
    CHECK(tri.back().s == 10);
    CHECK(rectangular_grid(2, 4, 1, 2).size() == 6);
    CHECK(triangular_grid(1, 0, 4, 8).empty());
  }

  TEST_CASE("empty sweep") {
    const auto r = sweep([](long m, long s) { return mu_from_template(kMuFirst, m, s); }, {}, shared("4.5e16", 14),
                         *tau(80), 61);
    CHECK_FALSE(r.minimum);
    CHECK(r.failures.empty());
    CHECK(r.rows.empty());
  }

  TEST_CASE("small second sweep finds the two failing points") {
    const auto grid = triangular_grid(0, 12, 2, 8);
    SweepOptions opts;
    opts.congruence_first = {4, 8};
    const auto r = sweep([](long m, long s) { return mu_from_template(kMuSecond, m, s); }, grid, shared("4.6e16", 8),
                         *tau(120), 92, opts);
    REQUIRE(r.failures.size() == 2);
    CHECK(r.failures[0].m == 1);
    CHECK(r.failures[0].s == 4);
    CHECK(r.failures[1].m == 2);
    CHECK(r.failures[1].s == 8);
    CHECK(r.unresolved.empty());
    for (const auto& row : r.rows) {
      CHECK((row.point.s == 4 || row.point.s == 8) == std::holds_alternative<Excluded>(row.outcome));
    }
    // default policy retries later convergents first
    const auto retry = sweep([](long m, long s) { return mu_from_template(kMuSecond, m, s); }, grid, shared("4.6e16", 8),
                             *tau(120), 92);
    CHECK(retry.failures.size() == 2);
    CHECK(retry.unresolved.empty());
  }

  TEST_CASE("sweep minimum is stable under four times the precision") {
    const auto grid = triangular_grid(40, 55, 4, 8);
    const auto cf = tau(80);
    const auto r = sweep([](long m, long s) { return mu_from_template(kMuFirst, m, s); }, grid, shared("4.5e16", 14), *cf,
                         61);
    REQUIRE(r.minimum);
    CHECK(r.minimum->point.m == 50);
    CHECK(r.minimum->point.s == 20);
    const BigNat q = cf->q(61);
    const Expr mu = mu_from_template(kMuFirst, 50, 20);
    const long bits = 4 * (static_cast<long>(bit_length(q)) + 96);
    const Interval e = distance_to_nearest_integer(eval(mu * Expr(q), bits)) -
                       Interval::exact(parse_rational("4.5e16"), bits) * distance_to_nearest_integer(eval(tau_expr() * Expr(q), bits));
    CHECK(e.lower_rational() >= r.minimum->epsilon_lower);
    // published epsilon is truncated to 20 significant digits
    CHECK(e.lower_rational() - r.minimum->epsilon_lower < e.lower_rational() / BigNat("10000000000000000000"));
  }

  TEST_CASE("small instance oracle") {
    const auto t = concat::testing::run_oracle(100, 20261014);
    CHECK(t.reduced >= 100);
    CHECK(t.violations == 0);
    CHECK(t.undecided == 0);
    if (t.violations) MESSAGE(t.first_violation);
  }
}
