#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "concat/bignat.hpp"
#include "concat/contfrac.hpp"
#include "concat/realexpr.hpp"

namespace concat {

class NotExcludable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct ReductionProblem {
  BigNat M;
  Expr tau;
  Expr mu;
  Expr A;
  Expr B;
  std::string label;
};

struct Reduced {
  std::size_t q_index;
  BigNat q;
  Rational epsilon_lower;  // certified, truncated to 20 significant digits
  BigNat w_bound;          // ceil of an upper bound on log(Aq/eps)/log B; solutions have w < w_bound
  std::string w_decimal;   // that real bound, for display
};

struct EpsilonNonpositive {
  std::size_t q_index;
  BigNat q;
};

struct Excluded {
  std::string reason;
};

using ReductionOutcome = std::variant<Reduced, EpsilonNonpositive, Excluded>;

// Baker-Davenport reduction at convergent q_index of cf (first q > 6M when not given).
ReductionOutcome reduce(const ReductionProblem& p, const ContinuedFraction& cf,
                        std::optional<std::size_t> q_index = std::nullopt, long max_bits = kDefaultPrecisionCap);

// W from a given eps lower bound: ceil(upper(log(A q / eps) / log B)).
BigNat reduction_w_bound(const Expr& A, const Expr& B, const BigNat& q, const Rational& epsilon_lower,
                         std::string* decimal = nullptr);

// Excluded when F_t = F_{t+shift} (mod 5) has no solution; NotExcludable otherwise.
ReductionOutcome exclude_by_congruence(std::uint64_t shift, std::uint64_t modulus = 5);

// reduce at q_index, then at the next `retries` convergents, then try congruence exclusion of `shift`.
ReductionOutcome reduce_with_fallback(const ReductionProblem& p, const ContinuedFraction& cf, std::size_t q_index,
                                      std::optional<std::uint64_t> shift, int retries = 5,
                                      long max_bits = kDefaultPrecisionCap);

struct GridPoint {
  long m;
  long s;
  bool operator==(const GridPoint& o) const { return m == o.m && s == o.s; }
};

// m in [m0, m1], s in [s0, m + s_end_offset)
std::vector<GridPoint> triangular_grid(long m0, long m1, long s0, long s_end_offset);
// m in [m0, m1], s in [s0, s1]
std::vector<GridPoint> rectangular_grid(long m0, long m1, long s0, long s1);

// "{m}" and "{s}" placeholders inside a parse_expr template.
Expr mu_from_template(const std::string& tmpl, long m, long s);

struct SweepRow {
  GridPoint point;
  ReductionOutcome outcome;
  bool failed_at_primary;  // eps <= 0 at the primary convergent
};

struct SweepMinimum {
  Rational epsilon_lower;
  GridPoint point;
};

struct SweepResult {
  std::optional<SweepMinimum> minimum;  // over points reduced at the primary convergent
  std::vector<GridPoint> failures;      // eps <= 0 at the primary convergent
  std::vector<SweepRow> rows;           // grid order
  std::optional<BigNat> w_bound;        // max over all reduced rows
  std::vector<std::string> unresolved;  // labels of rows left without a bound
};

struct SweepOptions {
  int retries = 5;
  bool congruence_fallback = true;
  unsigned threads = 0;  // 0: hardware concurrency
  long max_bits = kDefaultPrecisionCap;
  std::vector<long> congruence_first;  // shifts closed by congruence at every m, reduced or not
};

SweepResult sweep(const std::function<Expr(long m, long s)>& mu_family, const std::vector<GridPoint>& grid,
                  const ReductionProblem& shared, const ContinuedFraction& cf, std::size_t q_index,
                  const SweepOptions& opts = {});

std::string outcome_status(const ReductionOutcome& o);

}  // namespace concat
