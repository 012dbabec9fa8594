#include "concat/realexpr.hpp"

#include <cctype>
#include <sstream>

namespace concat {

struct Expr::Node {
  ExprOp op;
  Rational value;
  long exponent = 0;
  std::vector<Expr> kids;
};

namespace {

const char* op_name(ExprOp op) {
  switch (op) {
    case ExprOp::Add: return "add";
    case ExprOp::Sub: return "sub";
    case ExprOp::Mul: return "mul";
    case ExprOp::Div: return "div";
    case ExprOp::Neg: return "neg";
    case ExprOp::Pow: return "pow";
    case ExprOp::Log: return "log";
    case ExprOp::Log10: return "log10";
    case ExprOp::Abs: return "abs";
    case ExprOp::Sqrt: return "sqrt";
    default: return "?";
  }
}

}  // namespace

Expr::Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
Expr::Expr() : Expr(Rational(0)) {}
Expr::Expr(long v) : Expr(Rational(v)) {}
Expr::Expr(const BigNat& v) : Expr(Rational(v)) {}
Expr::Expr(const Rational& v) {
  auto n = std::make_shared<Node>();
  n->op = ExprOp::Literal;
  n->value = v;
  n->value.canonicalize();
  node_ = std::move(n);
}

Expr Expr::literal(const Rational& v) { return Expr(v); }

Expr Expr::make(ExprOp op, std::vector<Expr> kids, long exponent) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->kids = std::move(kids);
  n->exponent = exponent;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::alpha() {
  static const Expr a = make(ExprOp::Alpha, {});
  return a;
}

Expr Expr::sqrt5() {
  static const Expr s = make(ExprOp::Sqrt5, {});
  return s;
}

Expr Expr::beta() { return Expr(1L) - alpha(); }

ExprOp Expr::op() const { return node_->op; }
const Rational& Expr::value() const { return node_->value; }
long Expr::exponent() const { return node_->exponent; }
const std::vector<Expr>& Expr::children() const { return node_->kids; }

std::string Expr::to_string() const {
  switch (op()) {
    case ExprOp::Literal: return to_fraction_string(value());
    case ExprOp::Alpha: return "alpha";
    case ExprOp::Sqrt5: return "sqrt5";
    case ExprOp::Pow: return std::string("(pow ") + children()[0].to_string() + " " + std::to_string(exponent()) + ")";
    default: break;
  }
  std::string s = std::string("(") + op_name(op());
  for (const auto& k : children()) s += " " + k.to_string();
  return s + ")";
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(ExprOp::Add, {a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(ExprOp::Sub, {a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(ExprOp::Mul, {a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::make(ExprOp::Div, {a, b}); }
Expr operator-(const Expr& a) { return Expr::make(ExprOp::Neg, {a}); }
Expr pow(const Expr& base, long exponent) { return Expr::make(ExprOp::Pow, {base}, exponent); }
Expr log(const Expr& a) { return Expr::make(ExprOp::Log, {a}); }
Expr log10(const Expr& a) { return Expr::make(ExprOp::Log10, {a}); }
Expr abs(const Expr& a) { return Expr::make(ExprOp::Abs, {a}); }
Expr sqrt(const Expr& a) { return Expr::make(ExprOp::Sqrt, {a}); }

namespace {

Interval eval_node(const Expr& e, long bits) {
  const auto& k = e.children();
  switch (e.op()) {
    case ExprOp::Literal: return Interval::exact(e.value(), bits);
    case ExprOp::Alpha: return alpha_interval(bits);
    case ExprOp::Sqrt5: return sqrt5_interval(bits);
    case ExprOp::Add: {
      Interval acc = eval_node(k[0], bits);
      for (std::size_t i = 1; i < k.size(); ++i) acc = acc + eval_node(k[i], bits);
      return acc;
    }
    case ExprOp::Mul: {
      Interval acc = eval_node(k[0], bits);
      for (std::size_t i = 1; i < k.size(); ++i) acc = acc * eval_node(k[i], bits);
      return acc;
    }
    case ExprOp::Sub: return eval_node(k[0], bits) - eval_node(k[1], bits);
    case ExprOp::Div: return eval_node(k[0], bits) / eval_node(k[1], bits);
    case ExprOp::Neg: return -eval_node(k[0], bits);
    case ExprOp::Pow: {
      // integer powers amplify relative error by |exponent|; pad the precision
      const long pad = static_cast<long>(bit_length(BigNat(std::labs(e.exponent())))) + 4;
      Interval base = eval_node(k[0], bits + pad);
      return pow(base, e.exponent());
    }
    case ExprOp::Log: return log(eval_node(k[0], bits));
    case ExprOp::Log10: return log10(eval_node(k[0], bits));
    case ExprOp::Abs: return abs(eval_node(k[0], bits));
    case ExprOp::Sqrt: return sqrt(eval_node(k[0], bits));
  }
  throw std::logic_error("eval: unknown node");
}

}  // namespace

std::optional<Rational> exact_rational(const Expr& e) {
  const auto& k = e.children();
  auto child = [&](std::size_t i) { return exact_rational(k[i]); };
  switch (e.op()) {
    case ExprOp::Literal: return e.value();
    case ExprOp::Add:
    case ExprOp::Mul: {
      auto acc = child(0);
      for (std::size_t i = 1; acc && i < k.size(); ++i) {
        auto v = child(i);
        if (!v) return std::nullopt;
        acc = e.op() == ExprOp::Add ? Rational(*acc + *v) : Rational(*acc * *v);
      }
      return acc;
    }
    case ExprOp::Sub:
    case ExprOp::Div: {
      auto x = child(0), y = child(1);
      if (!x || !y) return std::nullopt;
      if (e.op() == ExprOp::Sub) return Rational(*x - *y);
      if (*y == 0) throw DomainError("division by zero");
      return Rational(*x / *y);
    }
    case ExprOp::Neg: {
      auto x = child(0);
      if (!x) return std::nullopt;
      return Rational(-*x);
    }
    case ExprOp::Abs: {
      auto x = child(0);
      if (!x) return std::nullopt;
      return Rational(::abs(*x));
    }
    case ExprOp::Pow: {
      auto x = child(0);
      if (!x) return std::nullopt;
      long n = e.exponent();
      if (n < 0 && *x == 0) throw DomainError("division by zero");
      Rational base = n < 0 ? Rational(1 / *x) : *x;
      unsigned long u = static_cast<unsigned long>(n < 0 ? -n : n);
      Rational r;
      mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), u);
      mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), u);
      r.canonicalize();
      return r;
    }
    default: return std::nullopt;
  }
}

Interval eval(const Expr& e, long precision_bits) {
  if (precision_bits < kMinEvalBits) throw std::invalid_argument("eval: precision_bits must be >= 16");
  return eval_node(e, precision_bits);
}

Ordering compare(const Expr& a, const Expr& b, long max_bits) {
  return precision_ladder<Ordering>(
      [&](long bits) -> std::optional<Ordering> {
        const Interval x = eval(a, bits);
        const Interval y = eval(b, bits);
        if (mpfr_less_p(x.upper(), y.lower())) return Ordering::Less;
        if (mpfr_greater_p(x.lower(), y.upper())) return Ordering::Greater;
        return std::nullopt;
      },
      max_bits, "compare: operands not separated");
}

bool certainly_less(const Expr& a, const Expr& b, long max_bits) { return compare(a, b, max_bits) == Ordering::Less; }

Interval nearest_integer_distance(const Expr& e, long max_bits) {
  return precision_ladder<Interval>(
      [&](long bits) -> std::optional<Interval> {
        Interval d = distance_to_nearest_integer(eval(e, bits));
        if (d.is_point() || d.positive()) return d;
        return std::nullopt;
      },
      max_bits, "nearest_integer_distance: value not separated from an integer");
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr parse_all() {
    Expr e = parse();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("parse_expr: " + msg + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string token() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' && s_[pos_] != ')')
      ++pos_;
    if (start == pos_) fail("expected a token");
    return std::string(s_.substr(start, pos_ - start));
  }

  long integer_arg() {
    std::string t = token();
    try {
      std::size_t used = 0;
      long v = std::stol(t, &used);
      if (used != t.size()) fail("expected an integer, got '" + t + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("expected an integer, got '" + t + "'");
    }
  }

  Expr atom(const std::string& t) {
    if (t == "alpha") return Expr::alpha();
    if (t == "beta") return Expr::beta();
    if (t == "sqrt5") return Expr::sqrt5();
    return Expr(parse_rational(t));
  }

  Expr parse() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (s_[pos_] == ')') fail("unexpected ')'");
    if (s_[pos_] != '(') return atom(token());
    ++pos_;
    const std::string head = token();
    Expr out;
    if (head == "pow") {
      Expr base = parse();
      out = pow(base, integer_arg());
    } else if (head == "fib" || head == "lucas") {
      long n = integer_arg();
      if (n < 0) fail("negative sequence index");
      out = Expr(head == "fib" ? fib(static_cast<SeqIndex>(n)) : lucas(static_cast<SeqIndex>(n)));
    } else {
      std::vector<Expr> args;
      for (;;) {
        skip_ws();
        if (pos_ >= s_.size()) fail("missing ')'");
        if (s_[pos_] == ')') break;
        args.push_back(parse());
      }
      auto need = [&](std::size_t n) {
        if (args.size() != n) fail("'" + head + "' takes " + std::to_string(n) + " argument(s)");
      };
      if (head == "add" || head == "mul") {
        if (args.size() < 2) fail("'" + head + "' takes at least 2 arguments");
        out = args[0];
        for (std::size_t i = 1; i < args.size(); ++i) out = head == "add" ? out + args[i] : out * args[i];
      } else if (head == "sub") {
        need(2);
        out = args[0] - args[1];
      } else if (head == "div") {
        need(2);
        out = args[0] / args[1];
      } else if (head == "neg") {
        need(1);
        out = -args[0];
      } else if (head == "log") {
        need(1);
        out = log(args[0]);
      } else if (head == "log10") {
        need(1);
        out = log10(args[0]);
      } else if (head == "abs") {
        need(1);
        out = abs(args[0]);
      } else if (head == "sqrt") {
        need(1);
        out = sqrt(args[0]);
      } else {
        fail("unknown form '" + head + "'");
      }
    }
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
    ++pos_;
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace concat
