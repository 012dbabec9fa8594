#pragma once

#include <cstddef>
#include <memory>
#include <variant>
#include <vector>

#include "concat/bignat.hpp"
#include "concat/errors.hpp"
#include "concat/realexpr.hpp"

namespace concat {

// The expansion could not certify more quotients at the precision cap.
// The certified prefix is kept.
class ExpansionStalled : public PrecisionExhausted {
 public:
  ExpansionStalled(std::vector<BigNat> prefix, long bits)
      : PrecisionExhausted("continued fraction stalled after " + std::to_string(prefix.size()) + " quotients", bits),
        prefix_(std::move(prefix)) {}
  const std::vector<BigNat>& prefix() const { return prefix_; }

 private:
  std::vector<BigNat> prefix_;
};

// Partial quotients a_1, a_2, ... (1-based; a_1 is the integer part and may be 0) with
// convergents p_i/q_i. q(1) = 1. The classical 0-based numbering [a_0; a_1, ...] is
// available through classical_q / classical_p.
class ContinuedFraction {
 public:
  ContinuedFraction(Expr target, std::vector<BigNat> quotients, long certified_bits, bool terminated);

  const Expr& target() const { return target_; }
  std::size_t size() const { return quotients_.size(); }
  const std::vector<BigNat>& quotients() const { return quotients_; }
  const BigNat& a(std::size_t i) const;
  const BigNat& p(std::size_t i) const;
  const BigNat& q(std::size_t i) const;
  const BigNat& classical_q(std::size_t j) const { return q(j + 1); }
  const BigNat& classical_p(std::size_t j) const { return p(j + 1); }
  long certified_bits() const { return certified_bits_; }
  // True when the target is rational and the expansion is complete.
  bool terminated() const { return terminated_; }

 private:
  Expr target_;
  std::vector<BigNat> quotients_;
  std::vector<BigNat> p_;
  std::vector<BigNat> q_;
  long certified_bits_;
  bool terminated_;
};

// Certified expansion of `terms` quotients (fewer only for rational targets).
ContinuedFraction expand(const Expr& target, std::size_t terms, long max_bits = kDefaultPrecisionCap);

// Process-wide cache keyed by target.to_string(); grows on demand.
std::shared_ptr<const ContinuedFraction> cached_expansion(const Expr& target, std::size_t terms,
                                                          long max_bits = kDefaultPrecisionCap);

Expr tau_expr();          // log 10 / log alpha
Expr tau_inverse_expr();  // log alpha / log 10
std::shared_ptr<const ContinuedFraction> tau(std::size_t terms);
std::shared_ptr<const ContinuedFraction> tau_inverse(std::size_t terms);

struct IndexedDenominator {
  std::size_t index;
  BigNat q;
};

// First i with q_i > bound (q_{i-1} <= bound). Extends the expansion when needed.
IndexedDenominator first_denominator_exceeding(const ContinuedFraction& cf, const BigNat& bound);

struct PartialQuotientMax {
  std::size_t index;      // where the max is first attained
  BigNat value;
  std::size_t range_end;  // last i with q_i <= max_denominator
};

// max a_i over 1 <= i <= N+1, where N is the last index with q_N <= max_denominator.
// The next quotient a_{N+1} is included because |x - p_N/q_N| > 1/((a_{N+1}+2) q_N^2).
PartialQuotientMax max_partial_quotient(const ContinuedFraction& cf, const BigNat& max_denominator);

struct IsConvergent {
  std::size_t index;
};
struct NotClose {};
using LegendreResult = std::variant<IsConvergent, NotClose>;

LegendreResult legendre_locate(const Expr& target, const BigNat& p, const BigNat& q,
                               long max_bits = kDefaultPrecisionCap);

// 1/((a_max + 2) q^2): lower bound on |target - p/q| for any p when q <= max_denominator.
Rational approximation_floor(const ContinuedFraction& cf, const BigNat& q, const BigNat& max_denominator);

}  // namespace concat
