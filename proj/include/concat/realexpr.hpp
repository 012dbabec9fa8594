#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "concat/bignat.hpp"
#include "concat/bigseq.hpp"
#include "concat/errors.hpp"
#include "concat/interval.hpp"

namespace concat {

inline constexpr long kLadderStartBits = 128;
inline constexpr long kDefaultPrecisionCap = 1048576;
inline constexpr long kMinEvalBits = 16;

enum class ExprOp { Literal, Alpha, Sqrt5, Add, Sub, Mul, Div, Neg, Pow, Log, Log10, Abs, Sqrt };

// Immutable expression tree over rationals, alpha and sqrt5. Cheap to copy.
class Expr {
 public:
  Expr();  // the literal 0
  Expr(long v);  // NOLINT(google-explicit-constructor): integer literals read naturally
  Expr(const BigNat& v);  // NOLINT
  Expr(const Rational& v);  // NOLINT

  static Expr literal(const Rational& v);
  static Expr alpha();
  static Expr beta();  // 1 - alpha
  static Expr sqrt5();

  ExprOp op() const;
  const Rational& value() const;  // Literal only
  long exponent() const;          // Pow only
  const std::vector<Expr>& children() const;

  bool is_literal() const { return op() == ExprOp::Literal; }

  // Canonical prefix form, parseable by parse_expr.
  std::string to_string() const;

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n);
  static Expr make(ExprOp op, std::vector<Expr> kids, long exponent = 0);
  std::shared_ptr<const Node> node_;

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);
  friend Expr pow(const Expr&, long);
  friend Expr log(const Expr&);
  friend Expr log10(const Expr&);
  friend Expr abs(const Expr&);
  friend Expr sqrt(const Expr&);
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, long exponent);
Expr log(const Expr& a);
Expr log10(const Expr& a);
Expr abs(const Expr& a);
Expr sqrt(const Expr& a);

// Exact value when the tree has no irrational leaves and no log/sqrt nodes.
std::optional<Rational> exact_rational(const Expr& e);

// Fixed-precision evaluation. precision_bits >= 16. Throws DomainError for undefined
// values and InsufficientPrecision (a DomainError) when a sign is undecidable at this precision.
Interval eval(const Expr& e, long precision_bits);

enum class Ordering { Less, Greater };

// Certified strict comparison over the precision ladder up to max_bits.
Ordering compare(const Expr& a, const Expr& b, long max_bits = kDefaultPrecisionCap);
bool certainly_less(const Expr& a, const Expr& b, long max_bits = kDefaultPrecisionCap);

// Interval for ||e||. Exact for rational points; PrecisionExhausted when e cannot be
// separated from an integer at max_bits.
Interval nearest_integer_distance(const Expr& e, long max_bits = kDefaultPrecisionCap);

// Runs attempt(bits) at 128, 256, ... (clamped to [16, max_bits]) until it returns a value.
// InsufficientPrecision counts as "not yet". Throws PrecisionExhausted at the cap.
template <class T>
T precision_ladder(const std::function<std::optional<T>(long)>& attempt, long max_bits,
                   const std::string& what, long start_bits = kLadderStartBits) {
  long bits = std::max(kMinEvalBits, std::min(start_bits, max_bits));
  for (;;) {
    try {
      if (auto r = attempt(bits)) return *r;
    } catch (const InsufficientPrecision&) {
    }
    if (bits >= max_bits) throw PrecisionExhausted(what, max_bits);
    bits = std::min(bits * 2, max_bits);
  }
}

// Prefix syntax:
//   atoms     123  -7  22/7  4.5e16  0.00034  alpha  beta  sqrt5
//   forms     (add e e ...) (sub e e) (mul e e ...) (div e e) (neg e) (pow e n)
//             (log e) (log10 e) (abs e) (sqrt e) (fib n) (lucas n)
Expr parse_expr(std::string_view text);

}  // namespace concat
