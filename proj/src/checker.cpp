// Certificate replay. Uses only the certificate plus arithmetic primitives (exact integers,
// interval evaluation, Q(sqrt5)); none of the pipeline modules are called.
#include <algorithm>
#include <map>
#include <set>

#include "concat/prover.hpp"
#include "concat/qsqrt5.hpp"

namespace concat {

namespace {

struct CheckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw CheckError(what);
}

Rational Q(const Json& j) { return parse_rational(j.get<std::string>()); }
BigNat Z(const Json& j) {
  if (j.is_number_integer()) return BigNat(j.get<long>());
  return parse_bignat(j.get<std::string>());
}

BigNat ceil_q(const Rational& r) {
  BigNat c;
  mpz_cdiv_q(c.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return c;
}

// own sequence tables
struct Seqs {
  std::vector<BigNat> F{0, 1}, L{2, 1};
  void upto(std::size_t n) {
    while (F.size() <= n) {
      F.push_back(F[F.size() - 1] + F[F.size() - 2]);
      L.push_back(L[L.size() - 1] + L[L.size() - 2]);
    }
  }
  const BigNat& f(std::size_t n) { upto(n); return F[n]; }
  const BigNat& l(std::size_t n) { upto(n); return L[n]; }
};

std::uint64_t digits(const BigNat& v) { return to_decimal(v).size(); }

// Euclid on both ends of an enclosure, doubling precision until `terms` quotients agree.
std::vector<BigNat> own_quotients(const Expr& x, std::size_t terms, long max_bits) {
  for (long bits = 256;; bits *= 2) {
    const Interval iv = eval(x, bits);
    Rational lo = iv.lower_rational(), hi = iv.upper_rational();
    std::vector<BigNat> out;
    while (out.size() < terms) {
      BigNat a, b;
      mpz_fdiv_q(a.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
      mpz_fdiv_q(b.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
      if (a != b || lo == a || hi == a) break;
      out.push_back(a);
      Rational nlo = 1 / (hi - a), nhi = 1 / (lo - a);
      lo = nlo;
      hi = nhi;
    }
    if (out.size() >= terms) return out;
    require(bits < max_bits, "continued fraction not certified within the precision cap");
  }
}

std::vector<BigNat> denominators(const std::vector<BigNat>& a) {
  std::vector<BigNat> q;
  BigNat q2 = 1, q1 = 0;
  for (const auto& x : a) {
    BigNat c = x * q1 + q2;
    q.push_back(c);
    q2 = q1;
    q1 = c;
  }
  return q;
}

Expr log_alpha() { return log(Expr::alpha()); }

struct Record {
  long n, m, k;
  std::uint64_t d;
  std::string value;
  bool degenerate;
  bool operator<(const Record& o) const { return std::tie(m, k, n) < std::tie(o.m, o.k, o.n); }
  bool operator==(const Record& o) const {
    return n == o.n && m == o.m && k == o.k && d == o.d && value == o.value && degenerate == o.degenerate;
  }
};

// brute force over a widened n window
std::vector<Record> brute_search(Seqs& S, int eq, long m_max, long k_min, long k_max, long shift_bound) {
  std::vector<Record> out;
  S.upto(static_cast<std::size_t>(m_max + k_max + 16));
  for (long m = 0; m <= m_max; ++m) {
    for (long k = k_min; k <= k_max; ++k) {
      const BigNat right = eq == 1 ? S.l(k) : S.f(k);
      const BigNat left = eq == 1 ? S.f(m) : S.l(m);
      const auto d = digits(right);
      const bool degenerate = eq == 1 && m == 0;
      BigNat tens = 1;
      for (std::uint64_t i = 0; i < d; ++i) tens *= 10;
      const BigNat v = degenerate ? right : tens * left + right;
      for (long n = std::max(0L, m + k - 4); n <= m + k + 12; ++n) {
        if (n - k >= shift_bound) break;
        if (S.f(n) == v) out.push_back({n, m, k, d, to_decimal(v), degenerate});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Record> records_of(const Json& arr) {
  std::vector<Record> out;
  for (const auto& r : arr) {
    out.push_back({r.at("n").get<long>(), r.at("m").get<long>(), r.at("k").get<long>(), r.at("d").get<std::uint64_t>(),
                   r.at("value").get<std::string>(), r.at("degenerate").get<bool>()});
  }
  return out;
}

// X fails X < P(1 + log(aX + b)) and the gap keeps growing.
bool inequality_fails_from(const std::vector<Expr>& coeffs, const Rational& a, const Rational& b, const Rational& X) {
  const long bits = 256;
  const Interval x = Interval::exact(X, bits);
  const Interval arg = Interval::exact(a, bits) * x + Interval::exact(b, bits);
  if (mpfr_cmp_ui(arg.lower(), 1) < 0) return false;
  const Interval L = Interval::exact(Rational(1), bits) + log(arg);
  Interval P = Interval::exact(Rational(0), bits), dP = P, pw = Interval::exact(Rational(1), bits), dpw = pw;
  std::vector<Interval> c;
  for (const auto& e : coeffs) c.push_back(eval(e, bits));
  for (std::size_t i = 0; i < c.size(); ++i) {
    P = P + c[i] * pw;
    pw = pw * L;
  }
  for (std::size_t i = 1; i < c.size(); ++i) {
    dP = dP + Interval::exact(Rational(static_cast<long>(i)), bits) * c[i] * dpw;
    dpw = dpw * L;
  }
  if (!(x - P).positive()) return false;
  const Interval slope = dP * Interval::exact(a, bits) / arg;
  return mpfr_cmp_ui(slope.upper(), 1) < 0;
}

// certified lower bound of ||mu q|| - M ||tau q||, refined until it reaches at_least when given
Rational epsilon_lower(const Expr& mu, const Expr& tau, const BigNat& q, const BigNat& M, long max_bits,
                       const Rational& at_least = 0) {
  for (long bits = static_cast<long>(bit_length(q)) + 128;; bits *= 2) {
    try {
      const Interval dm = distance_to_nearest_integer(eval(mu * Expr(q), bits));
      const Interval dt = distance_to_nearest_integer(eval(tau * Expr(q), bits));
      const Interval e = dm - Interval::exact(M, bits) * dt;
      if (e.positive() && e.lower_rational() >= at_least) return e.lower_rational();
    } catch (const InsufficientPrecision&) {
    }
    require(bits < max_bits, "epsilon not certified positive within the precision cap");
  }
}

BigNat w_of(const Expr& A, const Expr& B, const BigNat& q, const Rational& eps) {
  return ceil_q(eval(log(A * Expr(q) / Expr(eps)) / log(B), 256).upper_rational());
}

std::string substitute(std::string s, const std::string& key, const std::string& value) {
  for (std::size_t p = s.find(key); p != std::string::npos; p = s.find(key, p + value.size())) s.replace(p, key.size(), value);
  return s;
}

class Replay {
 public:
  Replay(const Json& cert, long max_bits) : cert_(cert), max_bits_(max_bits) {}

  CheckReport run() {
    CheckReport rep;
    try {
      require(cert_.value("schema", "") == kCertificateSchema, "unknown schema");
      theorem_ = cert_.at("theorem").get<int>();
      require(theorem_ == 1 || theorem_ == 2, "theorem must be 1 or 2");
      eq_ = theorem_;
    } catch (const std::exception& e) {
      rep.ok = false;
      rep.failures.push_back(std::string("header: ") + e.what());
      return rep;
    }
    for (const auto& s : cert_.at("steps")) {
      const std::string id = s.value("id", "?");
      const std::string kind = s.value("kind", "?");
      index_[id] = &s;
      try {
        check_step(kind, s);
        rep.log.push_back(id + ": ok");
      } catch (const std::exception& e) {
        rep.ok = false;
        rep.failures.push_back(id + ": " + e.what());
      }
    }
    try {
      finish(rep);
    } catch (const std::exception& e) {
      rep.ok = false;
      rep.failures.push_back(std::string("conclusion: ") + e.what());
    }
    return rep;
  }

 private:
  const Json& step(const std::string& id) const {
    auto it = index_.find(id);
    require(it != index_.end(), "missing step " + id);
    return *it->second;
  }

  void check_step(const std::string& kind, const Json& s) {
    const Json& in = s.at("inputs");
    const Json& out = s.at("outputs");
    const std::string status = s.at("status").get<std::string>();
    require(status == "Verified" || status == "Discrepancy", "step is not closed (" + status + ")");
    if (kind == "search") return search(in, out);
    if (kind == "window") return window(in, out);
    if (kind == "shift_floor") return shift_floor(in);
    if (kind == "lucas_not_fib") return lucas_not_fib(in);
    if (kind == "exponent_max") return exponent_max(in);
    if (kind == "instances") return instances(out);
    if (kind == "height") return height(in);
    if (kind == "matveev_coefficient") return coefficient(in, out);
    if (kind == "bound") return bound(s.at("id").get<std::string>(), in, out);
    if (kind == "case_split") return case_split(in, out);
    if (kind == "combine") return combine(in, out);
    if (kind == "legendre_lemma") return legendre(in, out);
    if (kind == "reduction") return reduction(in, out);
    if (kind == "branch_closed") return branch_closed(in);
    if (kind == "sweep") return sweep(in, out);
    if (kind == "congruence") return congruence(in, out);
    if (kind == "k_bound") return k_bound(in, out);
    if (kind == "contradiction") return contradiction(in);
    if (kind == "gap_closure") return gap_closure(in, out);
    throw CheckError("unknown step kind " + kind);
  }

  void search(const Json& in, const Json& out) {
    require(in.at("equation").get<int>() == eq_, "equation mismatch");
    search_max_ = in.at("m_max").get<long>();
    const long k_min = in.at("k_min").get<long>();
    require(k_min == (eq_ == 2 ? 1 : 0), "k range");
    auto mine = brute_search(S_, eq_, search_max_, k_min, in.at("k_max").get<long>(), 1L << 40);
    auto theirs = records_of(out.at("records"));
    require(mine == theirs, "solution records differ from a brute-force replay");
    for (const auto& r : theirs) {
      const std::string whole = to_decimal(S_.f(r.n));
      const std::string right = to_decimal(eq_ == 1 ? S_.l(r.k) : S_.f(r.k));
      const std::string left = r.degenerate ? "" : to_decimal(eq_ == 1 ? S_.f(r.m) : S_.l(r.m));
      require(whole == left + right, "concatenation string check");
    }
    std::set<std::string> vals;
    for (const auto& r : theirs) vals.insert(r.value);
    std::set<std::string> claimed;
    for (const auto& v : out.at("values")) claimed.insert(v.get<std::string>());
    require(vals == claimed, "value set");
    for (const auto& v : vals) values_.push_back(parse_bignat(v));
    std::sort(values_.begin(), values_.end());
  }

  void window(const Json& in, const Json& out) {
    (void)in;
    // a record missed by the printed window has n outside (m+k-1, m+k+7)
    for (const auto& r : records_of(out.at("missed_by_printed"))) {
      require(eq_ == 2, "printed window differs only for the second equation");
      require(r.n <= r.m + r.k - 1 || r.n >= r.m + r.k + 7, "record is inside the printed window");
    }
  }

  void shift_floor(const Json& in) {
    const long min_shift = in.at("min_shift").get<long>();
    require(min_shift == (eq_ == 1 ? 4 : 2), "unexpected minimum shift");
    const long K = in.at("k_checked_max").get<long>();
    for (long k = eq_ == 2 ? 1 : 0; k <= K; ++k) {
      const BigNat right = eq_ == 1 ? S_.l(k) : S_.f(k);
      BigNat tens = 1;
      for (auto i = digits(right); i > 0; --i) tens *= 10;
      for (long j = 0; j < min_shift; ++j) require(S_.f(k + j) - right < tens, "small shift at k=" + std::to_string(k));
      if (eq_ == 1 && k >= 2) require(S_.f(k + 3) - S_.l(k) == S_.f(k + 1) + S_.f(k - 2), "identity");
    }
    min_shift_ = min_shift;
  }

  void lucas_not_fib(const Json& in) {
    const long K = in.at("k_checked_max").get<long>();
    for (long k = 3; k <= K; ++k) require(S_.f(k + 1) < S_.l(k) && S_.l(k) < S_.f(k + 2), "L_k between Fibonacci numbers");
  }

  void exponent_max(const Json& in) {
    const long M = in.at("m_checked_max").get<long>();
    const long K = in.at("k_checked_max").get<long>();
    // own micro range: k-1 < n-m+1 <= d < (k+6)/4 resp. (k+3)/4
    long k_micro = 0;
    for (long k = 1; k <= 64; ++k) {
      const Rational hi = eq_ == 1 ? Rational(k + 6, 4) : Rational(k + 3, 4);
      if (Rational(k - 1) < hi) k_micro = k;
    }
    for (long k = eq_ == 2 ? 1 : 0; k <= k_micro; ++k) {
      require(digits(eq_ == 1 ? S_.l(k) : S_.f(k)) == 1, "micro digit count");
      for (long m = 0; m <= M; ++m) {
        require(S_.f(m) < 10 * (eq_ == 1 ? S_.f(m) : S_.l(m)) + (eq_ == 1 ? S_.l(k) : S_.f(k)), "n > m");
      }
    }
    for (long k = eq_ == 2 ? 1 : 0; k <= K; ++k) {
      require(static_cast<long>(digits(eq_ == 1 ? S_.l(k) : S_.f(k))) < k + min_shift_, "d < n");
    }
  }

  void instances(const Json& out) {
    for (const auto& i : out.at("instances")) {
      const std::string fam = i.at("family").get<std::string>();
      const long n = i.at("n").get<long>(), m = i.at("m").get<long>(), k = i.at("k").get<long>();
      const auto d = i.at("d").get<std::uint64_t>();
      require(d == digits(eq_ == 1 ? S_.l(k) : S_.f(k)), "instance digit count");
      QSqrt5 ten_d(1);
      for (std::uint64_t j = 0; j < d; ++j) ten_d = ten_d * QSqrt5(10);
      const QSqrt5 r5 = QSqrt5::sqrt5();
      QSqrt5 v;
      if (fam == "Lambda1") {
        v = ten_d * alpha_power(-(n - m));
      } else if (fam == "Lambda2") {
        v = ten_d * QSqrt5(Rational(S_.f(m))) * r5 * alpha_power(-n) * (QSqrt5(1) - alpha_power(k - n) * r5).inverse();
      } else if (fam == "Lambda3") {
        v = ten_d * r5 * alpha_power(-(n - m));
      } else if (fam == "Lambda4") {
        v = ten_d * QSqrt5(Rational(S_.l(m))) * r5 * alpha_power(-n) * (QSqrt5(1) - alpha_power(k - n)).inverse();
      } else {
        throw CheckError("unknown family " + fam);
      }
      v = v - QSqrt5(1);
      require(!(v == QSqrt5(0)), "linear form vanishes");
      require(v.to_string() == i.at("lambda").get<std::string>(), "linear form value");
    }
  }

  void height(const Json& in) {
    const Expr c = parse_expr(in.at("A3_constant").get<std::string>());
    const Expr per = parse_expr(in.at("A3_per_shift").get<std::string>());
    const long s0 = in.at("shift_range")[0].get<long>(), s1 = in.at("shift_range")[1].get<long>();
    const Expr half_log5 = Expr(Rational(1, 2)) * log(Expr(5L));
    for (long s = s0; s <= s1; ++s) {
      for (long m = eq_ == 1 ? 1 : 0; m <= s + 1; ++m) {
        const BigNat left = eq_ == 1 ? S_.f(m) : S_.l(m);
        Expr h = left > 1 ? log(Expr(left)) : Expr(0L);
        h = h + half_log5 + Expr(Rational(s, 2)) * log_alpha() + log(Expr(2L));
        if (eq_ == 1) h = h + half_log5;
        const Interval lhs = eval(Expr(2L) * h, 256);
        const Interval rhs = eval(c + per * Expr(s), 256);
        require(mpfr_cmp(lhs.upper(), rhs.lower()) < 0, "2h(eta_3) < A_3 at m=" + std::to_string(m));
      }
    }
  }

  void coefficient(const Json& in, const Json& out) {
    const long t = in.at("t").get<long>();
    const Expr dK(in.at("field_degree").get<long>());
    Expr K = Expr(Rational(7, 5)) * pow(Expr(30L), t + 3) * pow(Expr(t), 4) * sqrt(Expr(t)) * pow(dK, 2) *
             (Expr(1L) + log(dK));
    for (const auto& a : in.at("fixed_A")) K = K * parse_expr(a.get<std::string>());
    const Expr scale = Expr(in.at("scale").get<long>()) * log_alpha();
    const Expr C = K / scale + log(Expr(Q(in.at("tail_numerator")))) / scale;
    const Interval iv = eval(C, 256);
    require(iv.upper_rational() <= Q(in.at("plan_value")), "coefficient exceeds plan value");
    require(iv.lower_rational() <= parse_rational(out.at("recomputed_upper").get<std::string>()) &&
                parse_rational(out.at("recomputed_lower").get<std::string>()) <= iv.upper_rational(),
            "recorded coefficient enclosure is off");
    coefficients_[in.at("family").get<std::string>()] = Q(in.at("plan_value"));
  }

  void bound(const std::string& id, const Json& in, const Json& out) {
    std::vector<Expr> coeffs;
    for (const auto& c : in.at("coeffs")) coeffs.push_back(parse_expr(c.get<std::string>()));
    const Rational a = Q(in.at("log_scale")), b = Q(in.at("log_offset"));
    const Rational plan = Q(in.at("plan_value"));
    const BigNat N = Z(out.at("bound"));
    require(Rational(N) <= plan, "bound exceeds plan value");
    require(inequality_fails_from(coeffs, a, b, Rational(N)), "inequality not refuted at the bound");
    require(inequality_fails_from(coeffs, a, b, plan), "inequality not refuted at the plan value");
    bounds_[id] = plan;
    if (out.contains("n_upper")) chain_.push_back(Z(out.at("n_upper")));
  }

  void case_split(const Json& in, const Json& out) {
    const Rational S = Q(in.at("shift_bound"));
    require(bounds_.count("shift_bound") && bounds_["shift_bound"] == S, "shift bound not certified");
    const BigNat v = 2 * ceil_q(S) + 8;
    require(Z(out.at("from_plan")) == v, "2S + 8");
    require(Rational(v) <= Q(in.at("plan_value")), "case bound exceeds plan value");
    bounds_["case_k_le_m"] = Q(in.at("plan_value"));
  }

  void combine(const Json& in, const Json& out) {
    Rational mx = 0;
    for (const auto& b : in.at("branches")) mx = std::max(mx, Q(b));
    require(bounds_.count("case_k_le_m") && bounds_.count("case_m_le_k"), "branch bounds missing");
    require(bounds_["case_k_le_m"] <= mx && bounds_["case_m_le_k"] <= mx, "branches not covered");
    n_upper_ = Z(out.at("n_upper"));
    require(Rational(n_upper_) >= mx, "n_upper below a branch bound");
    chain_.push_back(n_upper_);
  }

  void legendre(const Json& in, const Json& out) {
    require(Z(in.at("n_upper")) == n_upper_, "n_upper mismatch");
    const long m_lemma = in.at("m_lemma").get<long>(), offset = in.at("offset").get<long>();
    const long e = in.at("exponent").get<long>();
    require(m_lemma - offset >= e, "hypothesis floor");
    const auto& qs = out.at("quotients");
    const auto mine = own_quotients(log_alpha() / log(Expr(10L)), qs.size(), max_bits_);
    for (std::size_t i = 0; i < qs.size(); ++i) require(Z(qs[i]) == mine[i], "partial quotient " + std::to_string(i + 1));
    const auto q = denominators(mine);
    const std::size_t end = out.at("range_end").get<std::size_t>();
    require(end + 1 == mine.size(), "quotient list length");
    require(q[end - 1] <= n_upper_ && q[end] > n_upper_, "convergent range");
    BigNat amax = 0;
    for (const auto& a : mine) amax = std::max(amax, a);
    require(Z(out.at("a_max")) == amax, "maximum partial quotient");
    const Expr base = pow(Expr::alpha(), e) * log(Expr(10L)) / Expr(in.at("gamma_numerator").get<long>());
    const Rational leg = eval(base / Expr(2L), 512).lower_rational();
    const Rational am = eval(base / Expr(BigNat(amax + 2)), 512).lower_rational();
    require(leg >= Q(in.at("legendre_plan")) && am >= Q(in.at("amax_plan")), "threshold values");
    require(Q(in.at("legendre_plan")) > Rational(n_upper_) && Q(in.at("amax_plan")) > Rational(n_upper_),
            "thresholds do not exceed n_upper");
    m_lemma_ = m_lemma;
  }

  void reduction(const Json& in, const Json& out) {
    const BigNat M = Z(in.at("M"));
    require(M == n_upper_, "M must be n_upper");
    const std::size_t qi = in.at("q_index").get<std::size_t>();
    const Expr tau = parse_expr(in.at("tau").get<std::string>());
    require(tau.to_string() == (log(Expr(10L)) / log_alpha()).to_string(), "tau");
    const auto q = denominators(own_quotients(tau, qi, max_bits_));
    const BigNat qv = q[qi - 1];
    require(qv == Z(in.at("q")), "convergent denominator");
    require(qv > 6 * M, "q > 6M");
    const Expr mu = parse_expr(in.at("mu").get<std::string>());
    const Rational eps = Q(out.at("epsilon_lower"));
    require(eps > 0 && epsilon_lower(mu, tau, qv, M, max_bits_, eps) >= eps, "epsilon lower bound");
    const Expr A = parse_expr(in.at("A").get<std::string>()), B = parse_expr(in.at("B").get<std::string>());
    const BigNat w = w_of(A, B, qv, eps);
    require(w <= Z(out.at("w_bound")), "w bound");
    const long m_lemma = in.at("m_lemma").get<long>();
    const long floor_w = m_lemma - in.at("w_offset").get<long>();
    require(out.at("hypothesis_floor").get<long>() == floor_w && BigNat(floor_w) >= Z(out.at("w_bound")),
            "m > m_lemma not contradicted");
    m_lemma_ = m_lemma;
  }

  void branch_closed(const Json& in) {
    require(in.at("m_lemma").get<long>() == m_lemma_ && m_lemma_ <= search_max_, "k <= m branch");
  }

  void sweep(const Json& in, const Json& out) {
    const BigNat M = Z(in.at("M"));
    require(bounds_.count("refined_bound") && Rational(M) == bounds_["refined_bound"], "M must be the refined bound");
    const Expr tau = parse_expr(in.at("tau").get<std::string>());
    require(tau.to_string() == (log(Expr(10L)) / log_alpha()).to_string(), "tau");
    const std::size_t qi = in.at("q_index").get<std::size_t>();
    const auto q = denominators(own_quotients(tau, qi + 8, max_bits_));
    require(q[qi - 1] == Z(in.at("q")) && q[qi - 1] > 6 * M, "q");
    const Expr A = parse_expr(in.at("A").get<std::string>()), B = parse_expr(in.at("B").get<std::string>());
    const std::string tmpl = in.at("mu_template").get<std::string>();
    const auto& g = in.at("grid");
    const long m0 = g.at("m0").get<long>(), m1 = g.at("m1").get<long>(), s0 = g.at("s0").get<long>(),
               off = g.at("s_end_offset").get<long>();
    require(m1 >= m_lemma_ && m0 <= (eq_ == 1 ? 1 : 0) && s0 <= min_shift_ && off >= 8, "grid does not cover the box");
    const auto& rows = out.at("rows");
    std::size_t i = 0;
    Rational min_eps = -1;
    BigNat w_max = 0;
    std::map<std::size_t, Rational> min_by_q;
    for (long m = m0; m <= m1; ++m) {
      for (long s = s0; s < m + off; ++s, ++i) {
        require(i < rows.size(), "grid rows missing");
        const auto& r = rows[i];
        require(r[0].get<long>() == m && r[1].get<long>() == s, "grid order");
        const std::string st = r[2].get<std::string>();
        if (st == "excluded") {
          excluded_rows_.insert(s);
          continue;
        }
        require(st == "reduced", "row status");
        const std::size_t rq = r[3].get<std::size_t>();
        require(rq >= qi && rq <= qi + 8, "row convergent index");
        const Rational eps = Q(r[4]);
        const Expr mu = parse_expr(substitute(substitute(tmpl, "{m}", std::to_string(m)), "{s}", std::to_string(s)));
        require(eps > 0 && epsilon_lower(mu, tau, q[rq - 1], M, max_bits_, eps) >= eps,
                "epsilon at m=" + std::to_string(m) + " s=" + std::to_string(s));
        auto it = min_by_q.find(rq);
        if (it == min_by_q.end() || eps < it->second) min_by_q[rq] = eps;
        if (rq == qi && (min_eps < 0 || eps < min_eps)) min_eps = eps;
      }
    }
    require(i == rows.size(), "extra rows");
    for (const auto& [rq, e] : min_by_q) w_max = std::max(w_max, w_of(A, B, q[rq - 1], e));
    require(min_eps > 0 && min_eps == Q(out.at("min_epsilon")), "minimum epsilon");
    sweep_w_ = Z(out.at("w_bound"));
    require(w_max <= sweep_w_, "w bound");
    const long plan_w = in.at("plan_w").get<long>();
    require(sweep_w_ <= BigNat(in.at("w_inclusive").get<bool>() ? plan_w + 1 : plan_w), "w bound above plan");
  }

  void congruence(const Json& in, const Json& out) {
    require(in.at("modulus").get<long>() == 5, "modulus");
    // period of F mod 5
    std::vector<int> r{0, 1};
    while (!(r.size() > 2 && r[r.size() - 2] == 0 && r.back() == 1)) r.push_back((r[r.size() - 1] + r[r.size() - 2]) % 5);
    const std::size_t period = r.size() - 2;
    require(out.at("period").get<std::size_t>() == period, "period");
    for (const auto& sj : in.at("shifts")) {
      const long s = sj.get<long>();
      for (std::size_t t = 0; t < period; ++t) {
        require(r[t] != r[(t + static_cast<std::size_t>(s)) % period], "congruence has a solution for shift " + std::to_string(s));
      }
      congruence_.insert(s);
    }
  }

  void k_bound(const Json& in, const Json& out) {
    const BigNat W = Z(in.at("w_bound"));
    require(W == sweep_w_, "w bound mismatch");
    BigNat kmax;
    mpz_fdiv_q_ui(kmax.get_mpz_t(), BigNat(W - 1).get_mpz_t(), 2);
    k_bound_ = kmax + 1;
    require(Z(out.at("k_bound")) == k_bound_, "k bound");
    require(k_bound_ <= in.at("plan_k_bound").get<long>(), "k bound above plan");
    const BigNat n_final = 2 * kmax + in.at("k_slack").get<long>();
    require(Z(out.at("n_upper")) == n_final, "final n bound");
    chain_.push_back(n_final);
  }

  void contradiction(const Json& in) {
    require(Z(in.at("k_bound")) == k_bound_, "k bound");
    require(m_lemma_ <= search_max_ && k_bound_ <= search_max_ + 1, "no contradiction");
    contradiction_ = true;
  }

  void gap_closure(const Json& in, const Json& out) {
    require(Z(in.at("k_bound")) == k_bound_ && in.at("m_bound").get<long>() == m_lemma_, "box");
    const long kb = in.at("k_bound").get<long>();
    const auto recs = kb == 0 ? std::vector<Record>{}
                              : brute_search(S_, eq_, m_lemma_, eq_ == 2 ? 1 : 0, kb - 1, in.at("shift_bound").get<long>());
    std::set<std::string> vals;
    for (const auto& r : recs) vals.insert(r.value);
    std::set<std::string> claimed;
    for (const auto& v : out.at("values")) claimed.insert(v.get<std::string>());
    require(vals == claimed, "gap closure values");
    require(out.at("record_count").get<std::size_t>() == recs.size(), "gap closure count");
    for (const auto& v : vals) {
      require(std::find(values_.begin(), values_.end(), parse_bignat(v)) != values_.end(), "new solution in the box");
    }
  }

  void finish(CheckReport& rep) {
    for (const char* id : {"initial_search", "shift_floor", "exponent_max", "coefficient_shift", "coefficient_k",
                           "shift_bound", "case_k_le_m", "case_m_le_k", "n_upper", "m_bound", "branch_k_le_m",
                           "refined_bound", "reduction_sweep", "k_bound", "contradiction", "gap_closure"}) {
      (void)step(id);
    }
    for (long s : excluded_rows_) require(congruence_.count(s), "excluded shift without congruence proof");
    for (std::size_t i = 1; i < chain_.size(); ++i) require(chain_[i] <= chain_[i - 1], "n bounds are not monotone");
    require(contradiction_, "no contradiction step");
    const auto& concl = cert_.at("conclusion");
    require(!concl.is_null(), "certificate has no conclusion");
    std::vector<BigNat> claimed;
    for (const auto& v : concl.at("values")) claimed.push_back(parse_bignat(v.get<std::string>()));
    std::sort(claimed.begin(), claimed.end());
    require(claimed == values_, "conclusion differs from the searched solutions");
    rep.conclusion = claimed;
    if (!rep.ok) rep.conclusion.clear();
  }

  const Json& cert_;
  long max_bits_;
  int theorem_ = 0, eq_ = 0;
  Seqs S_;
  std::map<std::string, const Json*> index_;
  std::vector<BigNat> values_;
  long search_max_ = 0, min_shift_ = 0, m_lemma_ = 0;
  std::map<std::string, Rational> coefficients_, bounds_;
  BigNat n_upper_, sweep_w_, k_bound_;
  std::vector<BigNat> chain_;
  std::set<long> excluded_rows_, congruence_;
  bool contradiction_ = false;
};

}  // namespace

CheckReport check_certificate(const Json& certificate, long max_bits) {
  Replay r(certificate, max_bits);
  return r.run();
}

}  // namespace concat
