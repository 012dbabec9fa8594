#pragma once

#include <cmath>
#include <random>
#include <string>

#include "concat/contfrac.hpp"
#include "concat/reduction.hpp"

namespace concat::testing {

struct OracleTally {
  int problems = 0;
  int reduced = 0;
  int violations = 0;
  int undecided = 0;
  std::string first_violation;
};

// Brute force over 1 <= u <= M: a reduced problem admits no u with
// 0 < ||u tau + mu|| < A B^-w0, which is the strongest case w = w0.
inline void brute_check(const ReductionProblem& p, const Reduced& r, OracleTally& tally) {
  constexpr long bits = 256;
  const Interval t = eval(p.tau, bits), mu = eval(p.mu, bits);
  const Interval bound = eval(p.A / pow(p.B, static_cast<long>(r.w_bound.get_si())), bits);
  const unsigned long M = p.M.get_ui();
  for (unsigned long u = 1; u <= M; ++u) {
    const Interval d = distance_to_nearest_integer(Interval::exact(BigNat(u), bits) * t + mu);
    if (mpfr_cmp(d.lower(), bound.upper()) > 0) continue;
    if (d.contains(Rational(0))) continue;  // an exact zero is not a solution
    if (mpfr_cmp(d.upper(), bound.lower()) < 0) {
      if (tally.violations++ == 0) tally.first_violation = p.label + " u=" + std::to_string(u);
    } else {
      ++tally.undecided;
    }
  }
}

// Synthetic problems: tau = sqrt(r) or log a / log b, mu a rational or log, small A and B, M <= 10^4.
inline OracleTally run_oracle(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  OracleTally tally;
  while (tally.reduced < count && tally.problems < 50 * count) {
    ++tally.problems;
    Expr tau;
    if (pick(0, 1) == 0) {
      long r = pick(2, 99);
      while (static_cast<long>(std::sqrt(static_cast<double>(r))) * static_cast<long>(std::sqrt(static_cast<double>(r))) == r) ++r;
      tau = sqrt(Expr(r));
    } else {
      const long a = pick(2, 30);
      long b = pick(2, 30);
      while (b == a || (a % b == 0) || (b % a == 0)) b = pick(2, 30);
      tau = log(Expr(a)) / log(Expr(b));
    }
    const Expr mu = pick(0, 2) == 0 ? log(Expr(pick(2, 50))) : Expr(Rational(pick(1, 97), pick(2, 101)));
    const Expr A = Expr(pick(1, 20));
    const Expr B = pick(0, 1) == 0 ? Expr(pick(2, 5)) : Expr::alpha();
    ReductionProblem p{BigNat(pick(10, 10000)), tau, mu, A, B, "synthetic #" + std::to_string(tally.problems)};
    const ContinuedFraction cf = expand(tau, 80);
    ReductionOutcome o;
    try {
      o = reduce(p, cf);
    } catch (const std::exception&) {
      continue;
    }
    if (const auto* r = std::get_if<Reduced>(&o)) {
      ++tally.reduced;
      brute_check(p, *r, tally);
    }
  }
  return tally;
}

}  // namespace concat::testing
