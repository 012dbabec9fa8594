#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "concat/bignat.hpp"
#include "concat/bigseq.hpp"
#include "concat/qsqrt5.hpp"
#include "concat/realexpr.hpp"

namespace concat {

class UnsupportedElement : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SideConditionViolated : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NoFiniteBound : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Descriptor of an element of Q(sqrt5), kept symbolic so that the height rules can be
// applied structurally.
class AlgElem {
 public:
  enum class Kind { Rational, Alpha, Sqrt5, Fib, Lucas, Add, Sub, Mul, Div, Pow };

  static AlgElem rational(const Rational& v);
  static AlgElem integer(long v) { return rational(Rational(v)); }
  static AlgElem alpha();
  static AlgElem sqrt5();
  static AlgElem fib(SeqIndex n);
  static AlgElem lucas(SeqIndex n);

  friend AlgElem operator+(const AlgElem& x, const AlgElem& y);
  friend AlgElem operator-(const AlgElem& x, const AlgElem& y);
  friend AlgElem operator*(const AlgElem& x, const AlgElem& y);
  friend AlgElem operator/(const AlgElem& x, const AlgElem& y);
  friend AlgElem pow(const AlgElem& x, long e);

  Kind kind() const { return node_->kind; }
  const std::vector<AlgElem>& children() const { return node_->kids; }
  long exponent() const { return node_->exponent; }
  QSqrt5 exact() const;  // exact value
  Expr real() const;     // the same value as a real expression
  std::string to_string() const;

  struct Node {
    Kind kind;
    Rational value;
    SeqIndex index = 0;
    long exponent = 0;
    std::vector<AlgElem> kids;
  };

 private:
  explicit AlgElem(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static AlgElem make(Kind k, std::vector<AlgElem> kids, long exponent = 0);
  std::shared_ptr<const Node> node_;
};

enum class HeightMode { Rules, Exact, Best };

struct HeightBound {
  Expr value;
  std::vector<std::string> trace;
};

// Certified upper bound on the absolute logarithmic height.
HeightBound height(const AlgElem& e, HeightMode mode = HeightMode::Best);

// -------- Matveev data --------

enum class LambdaKind { L1 = 1, L2 = 2, L3 = 3, L4 = 4 };

// A_i written as constant + per_shift·(n-k).
struct AffineA {
  Expr constant;
  Expr per_shift;  // 0 for fixed parameters
  std::string text;
  bool varies() const;
  Expr at(const Expr& shift) const { return constant + per_shift * shift; }
};

enum class ExponentBound { NMinusM, N };
enum class SmallSide { ShiftMinusOffset, TwoK };  // what W is in |Lambda| < c/alpha^W

// One row of the Lambda table. Everything the engine needs is data.
struct LambdaFamily {
  LambdaKind kind;
  std::string name;
  int equation;  // 1: F_n = 10^d F_m + L_k, 2: F_n = 10^d L_m + F_k
  int t;
  int field_degree;
  std::vector<AffineA> A;
  ExponentBound B;
  Rational tail_numerator;  // c in |Lambda| < c / alpha^W
  SmallSide side;
  long offset;      // W = n-k-offset for ShiftMinusOffset
  long min_shift;   // side condition on n-k
  std::string printed_coefficient;
  std::string printed_A_last;  // the printed form of the last A when it differs from ours
  std::string nonvanishing_witness;
  std::string inequality_text;
};

const LambdaFamily& lambda_family(LambdaKind kind);

struct IndexTuple {
  SeqIndex n, m, k;
};

struct LinearFormInstance {
  LambdaKind kind;
  IndexTuple params;
  int t;
  int field_degree;
  std::uint64_t d;
  std::vector<AlgElem> eta;
  std::vector<BigNat> b_abs;  // |b_i|
  std::vector<bool> b_negative;
  std::vector<Expr> A;
  BigNat B;
  std::string nonvanishing_witness;
};

// Builds the instance at concrete indices, certifying A_i >= max{d h, |log eta|, 0.16},
// B >= max|b_i| and Lambda != 0 (exact arithmetic in Q(sqrt5)).
LinearFormInstance lambda_instance(LambdaKind kind, const IndexTuple& params);

// Exact value of Lambda = prod eta_i^{b_i} - 1.
QSqrt5 lambda_value(const LinearFormInstance& inst);

// 1.4·30^{t+3}·t^{4.5}·d^2(1+log d)(1+log B)·A_1···A_t
Expr matveev_exponent(int t, int field_degree, const std::vector<Expr>& A, const Expr& B);
Expr matveev_exponent(const LinearFormInstance& inst);

// C with W < C·(1+log B)·A_var (or W < C·(1+log B) when every A is fixed), W normalized
// to n-k-offset or k. The tail constant log c/(scale log alpha) is absorbed using 1+log B >= 1
// and A_var >= 1.
Expr family_coefficient(const LambdaFamily& fam);

// X < P(L) with L = 1 + log(a X + b) and P(L) = sum coeffs[i] L^i (degree <= 2, coeffs >= 0).
struct BoundInequality {
  std::vector<Expr> coeffs;
  Rational log_scale = 1;
  Rational log_offset = 0;
  std::string text;
};

struct SolvedBound {
  BigNat bound;          // rounded up to 2 significant digits; inequality fails for all X >= bound
  Rational tight_upper;  // tight value T (upper end of a certified enclosure)
  std::string tight_decimal;
  bool holds_below;      // X = floor(T) - 1 still satisfies the inequality
};

SolvedBound solve_bound(const BoundInequality& ineq, long max_bits = 4096);

// Inequality for the branch where n-B is controlled by n-k directly: X - offset < C (1 + log X).
BoundInequality shift_bound_inequality(const Expr& coefficient, long offset, const std::string& text);
// n < 2k + c with k < C2 (1+log n) A(s), s < off + C1 (1+log n), A(s) = E + F s.
BoundInequality chained_bound_inequality(const Expr& c2, const AffineA& a_last, long shift_offset, const Expr& c1,
                                         long k_slack, const std::string& text);
// n < 2k + c with k < C (1+log n) A(s_max).
BoundInequality refined_bound_inequality(const Expr& c, const AffineA& a_last, long shift_max, long k_slack,
                                         const std::string& text);

}  // namespace concat
