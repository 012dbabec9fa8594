#include "concat/linforms.hpp"

#include <algorithm>
#include <map>
#include <cmath>
#include <numeric>

namespace concat {

// ---------------- AlgElem ----------------

AlgElem AlgElem::make(Kind k, std::vector<AlgElem> kids, long exponent) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->kids = std::move(kids);
  n->exponent = exponent;
  return AlgElem(std::shared_ptr<const Node>(std::move(n)));
}

AlgElem AlgElem::rational(const Rational& v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Rational;
  n->value = v;
  n->value.canonicalize();
  return AlgElem(std::shared_ptr<const Node>(std::move(n)));
}

AlgElem AlgElem::alpha() { return make(Kind::Alpha, {}); }
AlgElem AlgElem::sqrt5() { return make(Kind::Sqrt5, {}); }

AlgElem AlgElem::fib(SeqIndex n) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Fib;
  node->index = n;
  return AlgElem(std::shared_ptr<const Node>(std::move(node)));
}

AlgElem AlgElem::lucas(SeqIndex n) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Lucas;
  node->index = n;
  return AlgElem(std::shared_ptr<const Node>(std::move(node)));
}

AlgElem operator+(const AlgElem& x, const AlgElem& y) { return AlgElem::make(AlgElem::Kind::Add, {x, y}); }
AlgElem operator-(const AlgElem& x, const AlgElem& y) { return AlgElem::make(AlgElem::Kind::Sub, {x, y}); }
AlgElem operator*(const AlgElem& x, const AlgElem& y) { return AlgElem::make(AlgElem::Kind::Mul, {x, y}); }
AlgElem operator/(const AlgElem& x, const AlgElem& y) { return AlgElem::make(AlgElem::Kind::Div, {x, y}); }
AlgElem pow(const AlgElem& x, long e) { return AlgElem::make(AlgElem::Kind::Pow, {x}, e); }

QSqrt5 AlgElem::exact() const {
  const auto& k = node_->kids;
  switch (kind()) {
    case Kind::Rational: return QSqrt5(node_->value);
    case Kind::Alpha: return QSqrt5::alpha();
    case Kind::Sqrt5: return QSqrt5::sqrt5();
    case Kind::Fib: return QSqrt5(Rational(concat::fib(node_->index)));
    case Kind::Lucas: return QSqrt5(Rational(concat::lucas(node_->index)));
    case Kind::Add: return k[0].exact() + k[1].exact();
    case Kind::Sub: return k[0].exact() - k[1].exact();
    case Kind::Mul: return k[0].exact() * k[1].exact();
    case Kind::Div: return k[0].exact() / k[1].exact();
    case Kind::Pow:
      if (k[0].kind() == Kind::Alpha) return alpha_power(node_->exponent);
      return concat::pow(k[0].exact(), node_->exponent);
  }
  throw UnsupportedElement("AlgElem: unknown kind");
}

Expr AlgElem::real() const {
  const auto& k = node_->kids;
  switch (kind()) {
    case Kind::Rational: return Expr(node_->value);
    case Kind::Alpha: return Expr::alpha();
    case Kind::Sqrt5: return Expr::sqrt5();
    case Kind::Fib: return Expr(concat::fib(node_->index));
    case Kind::Lucas: return Expr(concat::lucas(node_->index));
    case Kind::Add: return k[0].real() + k[1].real();
    case Kind::Sub: return k[0].real() - k[1].real();
    case Kind::Mul: return k[0].real() * k[1].real();
    case Kind::Div: return k[0].real() / k[1].real();
    case Kind::Pow: return concat::pow(k[0].real(), node_->exponent);
  }
  throw UnsupportedElement("AlgElem: unknown kind");
}

std::string AlgElem::to_string() const {
  const auto& k = node_->kids;
  switch (kind()) {
    case Kind::Rational: return to_fraction_string(node_->value);
    case Kind::Alpha: return "alpha";
    case Kind::Sqrt5: return "sqrt5";
    case Kind::Fib: return "F_" + std::to_string(node_->index);
    case Kind::Lucas: return "L_" + std::to_string(node_->index);
    case Kind::Add: return "(" + k[0].to_string() + " + " + k[1].to_string() + ")";
    case Kind::Sub: return "(" + k[0].to_string() + " - " + k[1].to_string() + ")";
    case Kind::Mul: return k[0].to_string() + "*" + k[1].to_string();
    case Kind::Div: return k[0].to_string() + "/" + k[1].to_string();
    case Kind::Pow: return k[0].to_string() + "^(" + std::to_string(node_->exponent) + ")";
  }
  return "?";
}

// ---------------- heights ----------------

namespace {

Expr log_max_abs_num_den(const Rational& r) {
  BigNat p = ::abs(r.get_num());
  BigNat q = r.get_den();
  BigNat mx = p > q ? p : q;
  if (mx == 1) return Expr(0L);
  return log(Expr(mx));
}

HeightBound rules_height(const AlgElem& e) {
  using K = AlgElem::Kind;
  HeightBound out;
  auto sub = [&](const AlgElem& c) {
    HeightBound hb = rules_height(c);
    for (auto& s : hb.trace) out.trace.push_back(std::move(s));
    return hb.value;
  };
  const auto& k = e.children();
  switch (e.kind()) {
    case K::Rational:
      out.value = log_max_abs_num_den(e.exact().rational_part());
      out.trace.push_back("h(" + e.to_string() + ") = log max{|p|, q}");
      break;
    case K::Alpha:
      out.value = Expr(Rational(1, 2)) * log(Expr::alpha());
      out.trace.push_back("h(alpha) = (1/2) log alpha");
      break;
    case K::Sqrt5:
      out.value = Expr(Rational(1, 2)) * log(Expr(5L));
      out.trace.push_back("h(sqrt5) = log sqrt5");
      break;
    case K::Fib:
    case K::Lucas: {
      BigNat v = e.exact().rational_part().get_num();
      out.value = v <= 1 ? Expr(0L) : log(Expr(v));
      out.trace.push_back("h(" + e.to_string() + ") = log " + e.to_string());
      break;
    }
    case K::Add:
    case K::Sub:
      out.value = sub(k[0]) + sub(k[1]) + log(Expr(2L));
      out.trace.push_back("h(x +- y) <= h(x) + h(y) + log 2 for " + e.to_string());
      break;
    case K::Mul:
    case K::Div:
      out.value = sub(k[0]) + sub(k[1]);
      out.trace.push_back("h(x y^{+-1}) <= h(x) + h(y) for " + e.to_string());
      break;
    case K::Pow:
      out.value = Expr(std::labs(e.exponent())) * sub(k[0]);
      out.trace.push_back("h(x^s) = |s| h(x) for " + e.to_string());
      break;
  }
  return out;
}

HeightBound exact_height(const AlgElem& e) {
  const QSqrt5 x = e.exact();
  HeightBound out;
  if (x.is_rational()) {
    out.value = log_max_abs_num_den(x.rational_part());
    out.trace.push_back("exact: " + e.to_string() + " is rational, h = log max{|p|, q}");
    return out;
  }
  // minimal polynomial X^2 - tX + N scaled to coprime integers
  const Rational t = x.trace();
  const Rational nrm = x.norm();
  BigNat lcm_den;
  mpz_lcm(lcm_den.get_mpz_t(), t.get_den_mpz_t(), nrm.get_den_mpz_t());
  BigNat c1 = ::abs(BigNat(t * lcm_den));
  BigNat c2 = ::abs(BigNat(nrm * lcm_den));
  BigNat g = gcd(gcd(lcm_den, c1), c2);
  const BigNat a0 = lcm_den / g;
  Expr acc = a0 == 1 ? Expr(0L) : log(Expr(a0));
  auto add_conj = [&](const QSqrt5& y) {
    const bool big = (y - QSqrt5(1)).sign() > 0 || (y + QSqrt5(1)).sign() < 0;
    if (big) acc = acc + log(abs(Expr(y.rational_part()) + Expr(y.sqrt5_part()) * Expr::sqrt5()));
  };
  add_conj(x);
  add_conj(x.conjugate());
  out.value = Expr(Rational(1, 2)) * acc;
  out.trace.push_back("exact: minimal polynomial with leading coefficient " + to_decimal(a0) + " for " + e.to_string());
  return out;
}

}  // namespace

HeightBound height(const AlgElem& e, HeightMode mode) {
  switch (mode) {
    case HeightMode::Exact: return exact_height(e);
    case HeightMode::Rules: return rules_height(e);
    case HeightMode::Best: {
      HeightBound r = height(e, HeightMode::Rules);
      HeightBound x = exact_height(e);
      bool take_exact = true;
      try {
        take_exact = compare(x.value, r.value, 4096) == Ordering::Less;
      } catch (const PrecisionExhausted&) {
        take_exact = true;  // equal values: either is fine
      }
      HeightBound& pick = take_exact ? x : r;
      pick.trace.push_back(take_exact ? "best: exact height is smaller" : "best: rule bound is smaller");
      return pick;
    }
  }
  throw UnsupportedElement("height: unknown mode");
}

}  // namespace concat

namespace concat {

bool AffineA::varies() const { return !(per_shift.is_literal() && per_shift.value() == 0); }

namespace {

Expr log_alpha() { return log(Expr::alpha()); }

std::vector<LambdaFamily> build_families() {
  const Expr two_log10 = Expr(2L) * log(Expr(10L));
  const AffineA A1{two_log10, Expr(0L), "2 log 10"};
  const AffineA A2{log_alpha(), Expr(0L), "log alpha"};
  std::vector<LambdaFamily> f;
  f.push_back({LambdaKind::L1, "Lambda1", 1, 2, 2, {A1, A2}, ExponentBound::NMinusM, Rational(3), SmallSide::ShiftMinusOffset,
               7, 4, "2.41e10", "",
               "alpha^(n-m) = 10^d forces n = m (alpha^j is irrational for j != 0)",
               "|1 - 10^d alpha^-(n-m)| < 3/alpha^(n-k-7)"});
  f.push_back({LambdaKind::L2, "Lambda2", 1, 3, 2,
               {A1, A2, AffineA{two_log10, Expr(3L) * log_alpha(), "2 log 10 + 3(n-k) log alpha"}}, ExponentBound::N,
               Rational(7), SmallSide::TwoK, 0, 4, "2.24e12", "2 + (3(n-k)+2) log alpha",
               "conjugation: |beta^n + beta^k sqrt5| <= 2 sqrt5 < 10 sqrt5 <= 10^d F_m sqrt5",
               "|1 - 10^d F_m sqrt5 / (alpha^n (1 - alpha^(k-n) sqrt5))| < 7/alpha^(2k)"});
  f.push_back({LambdaKind::L3, "Lambda3", 2, 3, 2, {A1, A2, AffineA{log(Expr(5L)), Expr(0L), "log 5"}},
               ExponentBound::NMinusM, Rational(3), SmallSide::ShiftMinusOffset, 6, 2, "7.19e12", "",
               "alpha^(2(n-m)) = 5 * 10^(2d) is rational only for n = m",
               "|1 - 10^d sqrt5 / alpha^(n-m)| < 3/alpha^(n-k-6)"});
  f.push_back({LambdaKind::L4, "Lambda4", 2, 3, 2,
               {A1, A2,
                AffineA{Expr(2L) * log_alpha() + log(Expr(80L)), Expr(3L) * log_alpha(), "(3(n-k)+2) log alpha + log 80"}},
               ExponentBound::N, Rational(4), SmallSide::TwoK, 0, 2, "2.24e12", "",
               "conjugation and addition give L_n = L_k, so n = k",
               "|1 - 10^d L_m sqrt5 / (alpha^n (1 - alpha^(k-n)))| < 4/alpha^(2k)"});
  return f;
}

}  // namespace

const LambdaFamily& lambda_family(LambdaKind kind) {
  static const std::vector<LambdaFamily> table = build_families();
  return table.at(static_cast<std::size_t>(kind) - 1);
}

QSqrt5 lambda_value(const LinearFormInstance& inst) {
  QSqrt5 prod(1);
  for (std::size_t i = 0; i < inst.eta.size(); ++i) {
    const long b = static_cast<long>(inst.b_abs[i].get_ui()) * (inst.b_negative[i] ? -1 : 1);
    const AlgElem& e = inst.eta[i];
    if (e.kind() == AlgElem::Kind::Alpha) {
      prod = prod * alpha_power(b);
    } else {
      prod = prod * pow(e.exact(), b);
    }
  }
  return prod - QSqrt5(1);
}

LinearFormInstance lambda_instance(LambdaKind kind, const IndexTuple& params) {
  const LambdaFamily& fam = lambda_family(kind);
  const auto [n, m, k] = params;
  if (n < k + static_cast<SeqIndex>(fam.min_shift)) {
    throw SideConditionViolated(fam.name + ": needs n-k >= " + std::to_string(fam.min_shift));
  }
  if (fam.equation == 2 && k == 0) throw SideConditionViolated(fam.name + ": k = 0 has no digit count");
  const std::uint64_t d = digit_count(fam.equation == 1 ? lucas(k) : fib(k));
  const long s = static_cast<long>(n - k);

  LinearFormInstance inst;
  inst.kind = kind;
  inst.params = params;
  inst.t = fam.t;
  inst.field_degree = fam.field_degree;
  inst.d = d;
  inst.nonvanishing_witness = fam.nonvanishing_witness;

  const AlgElem ten = AlgElem::integer(10);
  const AlgElem one = AlgElem::integer(1);
  const bool uses_n_minus_m = fam.B == ExponentBound::NMinusM;
  if (uses_n_minus_m && n <= m) throw SideConditionViolated(fam.name + ": needs n > m");
  const BigNat second = uses_n_minus_m ? BigNat(static_cast<unsigned long>(n - m)) : BigNat(static_cast<unsigned long>(n));
  inst.eta = {ten, AlgElem::alpha()};
  inst.b_abs = {BigNat(static_cast<unsigned long>(d)), second};
  inst.b_negative = {false, true};
  switch (kind) {
    case LambdaKind::L1: break;
    case LambdaKind::L2:
      if (m == 0) throw SideConditionViolated("Lambda2: F_0 = 0 makes eta_3 vanish");
      inst.eta.push_back(AlgElem::fib(m) * AlgElem::sqrt5() / (one - pow(AlgElem::alpha(), -s) * AlgElem::sqrt5()));
      break;
    case LambdaKind::L3: inst.eta.push_back(AlgElem::sqrt5()); break;
    case LambdaKind::L4:
      inst.eta.push_back(AlgElem::lucas(m) * AlgElem::sqrt5() / (one - pow(AlgElem::alpha(), -s)));
      break;
  }
  if (inst.eta.size() == 3) {
    inst.b_abs.push_back(BigNat(1));
    inst.b_negative.push_back(false);
  }
  inst.B = second;
  for (const auto& b : inst.b_abs) {
    if (b > inst.B) throw SideConditionViolated(fam.name + ": B = " + to_decimal(inst.B) + " is below some |b_i|");
  }

  const Expr shift(s);
  const Expr floor_016(Rational(4, 25));
  for (std::size_t i = 0; i < inst.eta.size(); ++i) {
    const Expr Ai = fam.A[i].at(shift);
    inst.A.push_back(Ai);
    const QSqrt5 v = inst.eta[i].exact();
    if (v.sign() <= 0) throw SideConditionViolated(fam.name + ": eta_" + std::to_string(i + 1) + " is not positive");
    const Expr dh = Expr(static_cast<long>(fam.field_degree)) * height(inst.eta[i]).value;
    const Expr abslog = abs(log(inst.eta[i].real()));
    // for 10, alpha and sqrt5 the table entry is max{d h, |log eta|} in closed form
    // (2 log 10, log alpha, log 5); intervals cannot certify equality, so skip those two
    const auto kd = inst.eta[i].kind();
    const bool defined_as_dh = !fam.A[i].varies() && (kd == AlgElem::Kind::Rational || kd == AlgElem::Kind::Alpha ||
                                                      kd == AlgElem::Kind::Sqrt5);
    for (const Expr* lower : {&dh, &abslog, &floor_016}) {
      if (lower != &floor_016 && defined_as_dh) continue;
      if (compare(*lower, Ai, 1 << 14) == Ordering::Greater) {
        throw SideConditionViolated(fam.name + ": A_" + std::to_string(i + 1) + " too small at (n,m,k)");
      }
    }
  }
  if (lambda_value(inst).is_zero()) throw SideConditionViolated(fam.name + " vanishes at these indices");
  return inst;
}

Expr matveev_exponent(int t, int field_degree, const std::vector<Expr>& A, const Expr& B) {
  const Expr dK(static_cast<long>(field_degree));
  Expr e = Expr(Rational(7, 5)) * pow(Expr(30L), t + 3) * pow(Expr(static_cast<long>(t)), 4) * sqrt(Expr(static_cast<long>(t))) *
           pow(dK, 2) * (Expr(1L) + log(dK)) * (Expr(1L) + log(B));
  for (const auto& a : A) e = e * a;
  return e;
}

Expr matveev_exponent(const LinearFormInstance& inst) {
  return matveev_exponent(inst.t, inst.field_degree, inst.A, Expr(inst.B));
}

Expr family_coefficient(const LambdaFamily& fam) {
  const Expr dK(static_cast<long>(fam.field_degree));
  const long t = fam.t;
  Expr k = Expr(Rational(7, 5)) * pow(Expr(30L), static_cast<long>(t + 3)) * pow(Expr(t), 4) * sqrt(Expr(t)) * pow(dK, 2) *
           (Expr(1L) + log(dK));
  for (const auto& a : fam.A) {
    if (!a.varies()) k = k * a.constant;
  }
  const Expr scale = fam.side == SmallSide::TwoK ? Expr(2L) * log_alpha() : log_alpha();
  return k / scale + log(Expr(fam.tail_numerator)) / scale;
}

// ---------------- bound solving ----------------

namespace {

struct PolyEval {
  std::vector<Interval> c;
  Interval a, b;
  long bits;

  PolyEval(const BoundInequality& ineq, long bits_)
      : a(Interval::exact(ineq.log_scale, bits_)), b(Interval::exact(ineq.log_offset, bits_)), bits(bits_) {
    for (const auto& e : ineq.coeffs) c.push_back(eval(e, bits));
  }

  Interval L(const Interval& x) const { return Interval::exact(Rational(1), bits) + log(a * x + b); }

  Interval P(const Interval& l) const {
    Interval acc = Interval::exact(Rational(0), bits);
    Interval pw = Interval::exact(Rational(1), bits);
    for (const auto& ci : c) {
      acc = acc + ci * pw;
      pw = pw * l;
    }
    return acc;
  }

  Interval dP(const Interval& l) const {
    Interval acc = Interval::exact(Rational(0), bits);
    Interval pw = Interval::exact(Rational(1), bits);
    for (std::size_t i = 1; i < c.size(); ++i) {
      acc = acc + Interval::exact(Rational(static_cast<long>(i)), bits) * c[i] * pw;
      pw = pw * l;
    }
    return acc;
  }

  // X fails the inequality, and so does everything above it.
  bool fails_from(const Rational& X) const {
    const Interval x = Interval::exact(X, bits);
    const Interval arg = a * x + b;
    if (!(mpfr_cmp_ui(arg.lower(), 1) >= 0)) return false;
    const Interval l = L(x);
    const Interval g = x - P(l);
    if (!g.positive()) return false;
    // slope of P(L(X)) is dP(L) a/(aX+b); below 1 and decreasing for degree <= 2, L >= 1
    const Interval slope = dP(l) * a / arg;
    return mpfr_cmp_ui(slope.upper(), 1) < 0;
  }

  bool holds_at(const Rational& X) const {
    const Interval x = Interval::exact(X, bits);
    const Interval arg = a * x + b;
    if (!arg.positive()) return false;
    return (x - P(L(x))).negative();
  }
};

}  // namespace

SolvedBound solve_bound(const BoundInequality& ineq, long max_bits) {
  if (ineq.coeffs.empty() || ineq.coeffs.size() > 3) throw NoFiniteBound("solve_bound: supports 1 to 3 coefficients");
  if (ineq.log_scale <= 0) throw NoFiniteBound("solve_bound: log scale must be positive");
  const long bits = std::min<long>(std::max<long>(256, kMinEvalBits), max_bits);
  PolyEval pe(ineq, bits);
  for (const auto& ci : pe.c) {
    if (mpfr_sgn(ci.lower()) < 0) throw NoFiniteBound("solve_bound: coefficients must be non-negative");
  }
  // fixpoint estimate in long double
  std::vector<long double> cd;
  for (const auto& ci : pe.c) cd.push_back(static_cast<long double>(ci.upper_double()));
  const long double A = ineq.log_scale.get_d();
  const long double Bo = ineq.log_offset.get_d();
  auto G = [&](long double x) {
    const long double l = 1.0L + std::log(std::max(A * x + Bo, 1.0L));
    long double acc = 0, pw = 1;
    for (long double c : cd) {
      acc += c * pw;
      pw *= l;
    }
    return acc;
  };
  long double x = std::max<long double>(1.0L, G(1.0L));
  for (int i = 0; i < 500; ++i) {
    const long double nx = G(x);
    if (!std::isfinite(nx) || nx > 1e300L) throw NoFiniteBound("solve_bound: fixpoint iteration diverged");
    if (std::fabs(nx - x) <= x * 1e-17L) {
      x = nx;
      break;
    }
    x = nx;
  }
  Rational est;
  mpq_set_d(est.get_mpq_t(), static_cast<double>(x));
  Rational up = est * Rational(1000000001, 1000000000) + 1;
  int tries = 0;
  while (!pe.fails_from(up)) {
    if (++tries > 200) throw NoFiniteBound("solve_bound: could not certify a bound");
    up = up * 2 + 1;
  }
  SolvedBound out;
  out.tight_upper = up;
  out.tight_decimal = to_scientific(up, 6);
  out.bound = round_up_significant(up, 2);
  if (!pe.fails_from(Rational(out.bound))) throw NoFiniteBound("solve_bound: rounded bound not certified");
  Rational below = est * Rational(999999999, 1000000000) - 1;
  BigNat fl;
  mpz_fdiv_q(fl.get_mpz_t(), below.get_num_mpz_t(), below.get_den_mpz_t());
  out.holds_below = fl >= 1 && pe.holds_at(Rational(fl));
  return out;
}

BoundInequality shift_bound_inequality(const Expr& coefficient, long offset, const std::string& text) {
  BoundInequality b;
  b.coeffs = {Expr(offset), coefficient};
  b.text = text;
  return b;
}

BoundInequality chained_bound_inequality(const Expr& c2, const AffineA& a_last, long shift_offset, const Expr& c1,
                                         long k_slack, const std::string& text) {
  BoundInequality b;
  const Expr two_c2 = Expr(2L) * c2;
  b.coeffs = {Expr(k_slack), two_c2 * (a_last.constant + a_last.per_shift * Expr(shift_offset)),
              two_c2 * a_last.per_shift * c1};
  b.text = text;
  return b;
}

BoundInequality refined_bound_inequality(const Expr& c, const AffineA& a_last, long shift_max, long k_slack,
                                         const std::string& text) {
  BoundInequality b;
  b.coeffs = {Expr(k_slack), Expr(2L) * c * a_last.at(Expr(shift_max))};
  b.text = text;
  return b;
}

}  // namespace concat
