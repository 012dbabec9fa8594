#include "concat/prover.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <set>

#include "concat/bigseq.hpp"

#ifndef CONCAT_VERSION
#define CONCAT_VERSION "dev"
#endif

namespace concat {

std::string status_name(StepStatus s) {
  switch (s) {
    case StepStatus::Verified: return "Verified";
    case StepStatus::Discrepancy: return "Discrepancy";
    case StepStatus::Skipped: return "Skipped";
  }
  return "?";
}

namespace {

StepStatus status_from(const std::string& s) {
  if (s == "Verified") return StepStatus::Verified;
  if (s == "Discrepancy") return StepStatus::Discrepancy;
  if (s == "Skipped") return StepStatus::Skipped;
  throw std::invalid_argument("unknown step status " + s);
}

Json step_json(const StepRecord& s) {
  Json j;
  j["id"] = s.id;
  j["label"] = s.label;
  j["anchor"] = s.anchor;
  j["kind"] = s.kind;
  j["branch"] = s.branch;
  j["inputs"] = s.inputs;
  j["outputs"] = s.outputs;
  j["status"] = status_name(s.status);
  if (!s.details.empty()) j["details"] = s.details;
  return j;
}

}  // namespace

Json Certificate::to_json() const {
  Json j;
  j["schema"] = kCertificateSchema;
  j["theorem"] = theorem;
  j["environment"] = environment;
  j["notes"] = notes;
  Json steps_j = Json::array();
  for (const auto& s : steps) steps_j.push_back(step_json(s));
  j["steps"] = std::move(steps_j);
  if (conclusion) {
    Json vals = Json::array();
    for (const auto& v : *conclusion) vals.push_back(to_decimal(v));
    j["conclusion"] = {{"status", "Verified"}, {"values", vals}};
  } else {
    j["conclusion"] = nullptr;
  }
  return j;
}

Certificate Certificate::from_json(const Json& j) {
  if (j.value("schema", "") != kCertificateSchema) throw std::invalid_argument("certificate: unknown schema");
  Certificate c;
  c.theorem = j.at("theorem").get<int>();
  c.environment = j.value("environment", Json::object());
  for (const auto& n : j.value("notes", Json::array())) c.notes.push_back(n.get<std::string>());
  for (const auto& s : j.at("steps")) {
    StepRecord r;
    r.id = s.at("id").get<std::string>();
    r.label = s.value("label", "");
    r.anchor = s.value("anchor", "");
    r.kind = s.at("kind").get<std::string>();
    r.branch = s.value("branch", "");
    r.inputs = s.value("inputs", Json::object());
    r.outputs = s.value("outputs", Json::object());
    r.status = status_from(s.at("status").get<std::string>());
    r.details = s.value("details", "");
    c.steps.push_back(std::move(r));
  }
  const auto& concl = j.at("conclusion");
  if (!concl.is_null()) {
    std::vector<BigNat> vals;
    for (const auto& v : concl.at("values")) vals.push_back(parse_bignat(v.get<std::string>()));
    c.conclusion = std::move(vals);
  }
  return c;
}

StepFailed::StepFailed(StepRecord step, std::string reason)
    : std::runtime_error("step " + step.id + " (" + step.label + ") failed: " + reason),
      step_(std::move(step)),
      reason_(std::move(reason)) {}

// ---------------- plans ----------------

ProofPlan default_plan(int theorem) {
  ProofPlan p;
  if (theorem == 1) {
    p.mu_template = "(div (log (div (mul (fib {m}) sqrt5) (sub 1 (mul (pow alpha -{s}) sqrt5)))) (log alpha))";
    p.notes = {
        "m = 0 in F_n = 10^d F_m + L_k is read as F_n = L_k (left part absent); such records are flagged degenerate.",
        "Search ranges are inclusive: 0 <= m, k <= 200.",
        "q_60 uses the classical numbering [a_0; a_1, ...]; it is library convergent 61.",
        "Height of eta_3: the rules give A_3 = 2 log 10 + 3(n-k) log alpha; the printed 2 + (3(n-k)+2) log alpha is "
        "smaller and is not used.",
        "Epsilon lower bounds are interval lower endpoints truncated to 20 significant digits.",
    };
    return p;
  }
  if (theorem != 2) throw std::invalid_argument("default_plan: theorem must be 1 or 2");
  p.theorem = 2;
  p.equation = Equation::LucasFib;
  p.min_shift = 2;
  p.shift_family = LambdaKind::L3;
  p.k_family = LambdaKind::L4;
  p.shift_coefficient = "7.19e12";
  p.k_coefficient = "2.24e12";
  p.shift_offset = 6;
  p.k_slack = 8;
  p.shift_bound = "3e14";
  p.case_split_bound = "1e15";
  p.chain_bound = "2.5e29";
  p.m_lemma = 168;
  p.lemma = MLemma::Reduction;
  p.lemma_q_classical = 60;
  p.lemma_A_numerator = 6;
  p.lemma_epsilon = "0.017775";
  p.lemma_w = 160;
  p.refined_bound = "4.6e16";
  p.q_classical = 91;
  p.A_numerator = 8;
  p.mu_template = "(div (log (div (mul (lucas {m}) sqrt5) (sub 1 (pow alpha -{s})))) (log alpha))";
  p.grid_m0 = 0;
  p.grid_m1 = 168;
  p.grid_s0 = 2;
  p.grid_s_end_offset = 8;
  p.excluded_shifts = {4, 8};
  p.printed_epsilon = "0.000109";
  p.printed_w = 233;
  p.w_inclusive = true;
  p.printed_k_bound = 117;
  p.notes = {
      "Index window: the Binet estimates give m+k-2 < n < m+k+8. The printed m+k-1 < n < m+k+7 misses "
      "21 = F_8 = 10 L_0 + F_1. The corrected window is used, so n-k < m+8, n < 2k+8 and n-k-6 >= m-7.",
      "k = 0 is excluded: F_0 = 0 has no digit count.",
      "The reduction grid starts at n-k = 2, the smallest shift allowed by F_n > 10 F_k.",
      "|Gamma_4| < 8/alpha^(2k): the reduction uses A = 8/log alpha (the displayed numerator is empty).",
      "q_60 and q_91 use the classical numbering; they are library convergents 61 and 92.",
      "Search ranges are inclusive: 0 <= m <= 200, 1 <= k <= 200.",
      "Epsilon lower bounds are interval lower endpoints truncated to 20 significant digits.",
  };
  return p;
}

// ---------------- stand-alone lemma replays ----------------

LemmaReplay legendre_m_bound(const BigNat& n_upper, long exponent, long max_bits) {
  LemmaReplay out;
  auto cf = tau_inverse(64);
  out.amax = max_partial_quotient(*cf, n_upper);
  const Expr base = pow(Expr::alpha(), exponent) * log(Expr(10L));
  const long bits = std::min<long>(max_bits, 512);
  out.legendre_threshold = eval(base / Expr(12L), bits).lower_rational();
  out.amax_threshold = eval(base / (Expr(6L) * Expr(BigNat(out.amax.value + 2))), bits).lower_rational();
  const Rational nu(n_upper);
  out.contradiction = out.legendre_threshold >= nu && out.amax_threshold >= nu;
  return out;
}

ReductionLemmaReplay reduction_m_bound(const BigNat& n_upper, long m_lemma, std::size_t q_classical, long max_bits) {
  ReductionProblem p;
  p.M = n_upper;
  p.tau = tau_expr();
  p.mu = log(Expr::sqrt5()) / log(Expr::alpha());
  p.A = Expr(6L) / log(Expr::alpha());
  p.B = Expr::alpha();
  p.label = "m bound, mu = log sqrt5 / log alpha";
  auto cf = tau(q_classical + 8);
  ReductionLemmaReplay out{false, reduce(p, *cf, q_classical + 1, max_bits), m_lemma - 6};
  if (const auto* r = std::get_if<Reduced>(&out.outcome)) {
    out.contradiction = BigNat(out.hypothesis_floor) >= r->w_bound;
  }
  return out;
}

// ---------------- certify ----------------

namespace {

Rational R(const std::string& s) { return parse_rational(s); }

BigNat integer_of(const Rational& r) {
  BigNat c;
  mpz_cdiv_q(c.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return c;
}

Json bound_inputs(const BoundInequality& b, const std::string& plan_value) {
  Json coeffs = Json::array();
  for (const auto& c : b.coeffs) coeffs.push_back(c.to_string());
  return Json{{"coeffs", coeffs},
              {"log_scale", to_fraction_string(b.log_scale)},
              {"log_offset", to_fraction_string(b.log_offset)},
              {"inequality", b.text},
              {"plan_value", plan_value}};
}

std::string sci(const BigNat& v) { return to_scientific(Rational(v), 3); }

Json record_json(const SolutionRecord& r) {
  return Json{{"n", r.n}, {"m", r.m}, {"k", r.k}, {"d", r.d}, {"value", to_decimal(r.value)}, {"degenerate", r.degenerate}};
}

class Runner {
 public:
  Runner(const ProofPlan& plan, const CertifyOptions& opts) : plan_(plan), opts_(opts) {
    cert_.theorem = plan.theorem;
    cert_.notes = plan.notes;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    cert_.environment = Json{{"version", CONCAT_VERSION},
                             {"precision_cap_bits", opts.precision_cap},
                             {"ladder_start_bits", kLadderStartBits},
                             {"bound_bits", 256},
                             {"timestamp", buf}};
  }

  Certificate run() {
    guarded("initial_search", [&] { initial_search(); });
    guarded("index_window", [&] { index_window_check(); });
    guarded("shift_floor", [&] { shift_floor(); });
    if (plan_.equation == Equation::FibLucas) guarded("degenerate_left", [&] { degenerate_left(); });
    guarded("exponent_max", [&] { exponent_max(); });
    guarded("instances", [&] { instances(); });
    guarded("height_eta3", [&] { height_eta3(); });
    guarded("coefficient_shift", [&] { coefficient(plan_.shift_family, plan_.shift_coefficient, "coefficient_shift"); });
    guarded("coefficient_k", [&] { coefficient(plan_.k_family, plan_.k_coefficient, "coefficient_k"); });
    guarded("shift_bound", [&] { shift_bound(); });
    guarded("case_k_le_m", [&] { case_k_le_m(); });
    guarded("case_m_le_k", [&] { case_m_le_k(); });
    guarded("n_upper", [&] { combine(); });
    if (plan_.lemma == MLemma::Legendre) {
      guarded("m_bound", [&] { legendre_lemma(); });
    } else {
      guarded("m_bound", [&] { reduction_lemma(); });
    }
    guarded("branch_k_le_m", [&] { branch_closed(); });
    guarded("refined_bound", [&] { refined(); });
    guarded("reduction_sweep", [&] { sweep_step(); });
    if (!plan_.excluded_shifts.empty()) guarded("congruence", [&] { congruence(); });
    guarded("k_bound", [&] { k_bound(); });
    guarded("contradiction", [&] { contradiction(); });
    guarded("gap_closure", [&] { gap_closure(); });
    cert_.conclusion = values_;
    return cert_;
  }

 private:
  template <class F>
  void guarded(const std::string& id, F&& f) {
    try {
      f();
    } catch (const StepFailed&) {
      throw;
    } catch (const std::exception& e) {
      StepRecord s = make(id, id, "", "error");
      fail(std::move(s), e.what());
    }
  }

  StepRecord make(std::string id, std::string label, std::string anchor, std::string kind,
                  std::string branch = "main") const {
    StepRecord s;
    s.id = std::move(id);
    s.label = std::move(label);
    s.anchor = std::move(anchor);
    s.kind = std::move(kind);
    s.branch = std::move(branch);
    return s;
  }

  [[noreturn]] void fail(StepRecord s, const std::string& why) {
    s.details = why;
    throw StepFailed(std::move(s), why);
  }

  void push(StepRecord s) { cert_.steps.push_back(std::move(s)); }

  const LambdaFamily& shift_fam() const { return lambda_family(plan_.shift_family); }
  const LambdaFamily& k_fam() const { return lambda_family(plan_.k_family); }
  int eq_number() const { return static_cast<int>(plan_.equation); }

  // (a) -------------------------------------------------------------
  void initial_search() {
    auto s = make("initial_search", "exhaustive search over 0 <= m, k <= " + std::to_string(plan_.search_max),
                  "small-index search", "search");
    records_ = search_range(plan_.equation, plan_.search_max, plan_.search_max, IndexWindow::Corrected, opts_.threads);
    Json recs = Json::array();
    for (const auto& r : records_) {
      if (!concatenation_holds(r)) fail(s, "record fails the string concatenation check at n=" + std::to_string(r.n));
      recs.push_back(record_json(r));
    }
    values_ = value_set(records_);
    Json vals = Json::array();
    for (const auto& v : values_) vals.push_back(to_decimal(v));
    s.inputs = Json{{"equation", eq_number()},
                    {"equation_text", equation_text(plan_.equation)},
                    {"m_max", plan_.search_max},
                    {"k_max", plan_.search_max},
                    {"k_min", plan_.equation == Equation::LucasFib ? 1 : 0},
                    {"window", "m+k-2 < n < m+k+8"}};
    s.outputs = Json{{"records", recs}, {"values", vals}};
    push(std::move(s));
  }

  void index_window_check() {
    auto s = make("index_window", "index window soundness", "digit-count window", "window");
    auto unbounded = search_range(plan_.equation, plan_.search_max, plan_.search_max, IndexWindow::Unbounded,
                                  opts_.threads);
    if (unbounded != records_) fail(s, "membership test without a window finds different solutions");
    auto printed = search_range(plan_.equation, plan_.search_max, plan_.search_max, IndexWindow::Printed, opts_.threads);
    Json missing = Json::array();
    for (const auto& r : records_) {
      if (std::find(printed.begin(), printed.end(), r) == printed.end()) missing.push_back(record_json(r));
    }
    s.inputs = Json{{"corrected", "m+k-2 < n < m+k+8"},
                    {"printed", plan_.equation == Equation::FibLucas ? "m+k-2 < n < m+k+8" : "m+k-1 < n < m+k+7"}};
    s.outputs = Json{{"unbounded_matches", true}, {"missed_by_printed", missing}};
    if (!missing.empty()) {
      s.status = StepStatus::Discrepancy;
      s.details = "the printed window misses " + std::to_string(missing.size()) + " solution(s); the corrected window is used";
    }
    push(std::move(s));
  }

  // (b) -------------------------------------------------------------
  void shift_floor() {
    auto s = make("shift_floor", "n - k >= " + std::to_string(plan_.min_shift), "small shifts", "shift_floor");
    const SeqIndex K = 1000;
    // F_{k+j} - right(k) < 10^d <= 10^d * left(m) for j < min_shift and every m with left(m) >= 1
    for (SeqIndex k = (plan_.equation == Equation::LucasFib ? 1 : 0); k <= K; ++k) {
      const BigNat right = plan_.equation == Equation::FibLucas ? lucas(k) : fib(k);
      const BigNat tens = pow10(digit_count(right));
      for (long j = 0; j < plan_.min_shift; ++j) {
        if (fib(k + static_cast<SeqIndex>(j)) - right >= tens) fail(s, "small shift possible at k=" + std::to_string(k));
      }
    }
    std::string argument;
    if (plan_.equation == Equation::FibLucas) {
      for (SeqIndex k = 2; k <= K; ++k) {
        if (fib(k + 3) - lucas(k) != fib(k + 1) + fib(k - 2) || fib(k + 1) + fib(k - 2) > lucas(k)) {
          fail(s, "identity F_{k+3} - L_k = F_{k+1} + F_{k-2} <= L_k broke at k=" + std::to_string(k));
        }
      }
      argument = "L_k = F_{k+1} + F_{k-1} gives F_{k+j} - L_k <= F_{k+1} + F_{k-2} <= L_k < 10^d for j <= 3, "
                 "while 10^d F_m >= 10^d for m >= 1";
    } else {
      argument = "F_{k+1} - F_k = F_{k-1} <= F_k < 10^d <= 10^d L_m";
    }
    s.inputs = Json{{"equation", eq_number()}, {"min_shift", plan_.min_shift}, {"k_checked_max", K}};
    s.outputs = Json{{"argument", argument}, {"exact_checks", "passed"}};
    push(std::move(s));
  }

  void degenerate_left() {
    auto s = make("degenerate_left", "m = 0 gives F_n = L_k only for k < 3", "absent left part", "lucas_not_fib");
    const SeqIndex K = 1000;
    for (SeqIndex k = 3; k <= K; ++k) {
      if (!(fib(k + 1) < lucas(k) && lucas(k) < fib(k + 2))) fail(s, "L_k is not strictly between F_{k+1} and F_{k+2}");
    }
    s.inputs = Json{{"k_checked_max", K}};
    s.outputs = Json{{"argument", "F_{k+1} < L_k = F_{k+1} + F_{k-1} < F_{k+2} for k >= 3"}, {"small_k", "0, 1, 2"}};
    push(std::move(s));
  }

  void exponent_max() {
    auto s = make("exponent_max", "B = n - m for the first form and B = n for the second", "largest exponent",
                  "exponent_max");
    const bool eq1 = plan_.equation == Equation::FibLucas;
    // n-m < d with k-2 < n-m < d < hi(k) forces k <= k_micro
    SeqIndex k_micro = 0;
    for (SeqIndex k = 1; k <= 64; ++k) {
      const DigitBounds b = eq1 ? digit_bounds_lucas(k) : digit_bounds_fib(k);
      if (Rational(static_cast<long>(k) - 2) + 1 < b.hi) k_micro = k;
    }
    Json digits = Json::array();
    for (SeqIndex k = eq1 ? 0 : 1; k <= k_micro; ++k) {
      const auto d = digit_count(eq1 ? lucas(k) : fib(k));
      digits.push_back(d);
      if (d != 1) fail(s, "digit count above 1 among the micro cases");
    }
    // with d = 1, n - m < 1 means n <= m, but F_n exceeds the left part, which is >= F_m
    const SeqIndex M = 300;
    for (SeqIndex k = eq1 ? 0 : 1; k <= k_micro; ++k) {
      const BigNat right = eq1 ? lucas(k) : fib(k);
      for (SeqIndex m = 0; m <= M; ++m) {
        const BigNat v = 10 * (eq1 ? fib(m) : lucas(m)) + right;
        if (fib(m) >= v) fail(s, "F_m reaches the concatenation");
      }
    }
    // B = n for the second form: d < n
    for (SeqIndex k = eq1 ? 0 : 1; k <= 2000; ++k) {
      if (digit_count(eq1 ? lucas(k) : fib(k)) >= k + static_cast<SeqIndex>(plan_.min_shift)) {
        fail(s, "d >= n possible at k=" + std::to_string(k));
      }
    }
    s.inputs = Json{{"equation", eq_number()}, {"m_checked_max", M}, {"k_checked_max", 2000}};
    s.outputs = Json{{"k_micro_max", k_micro}, {"micro_digit_counts", digits},
                     {"argument", "n - m < d forces k <= k_micro and d = 1, so n <= m, impossible as F_n > F_m"}};
    push(std::move(s));
  }

  void instances() {
    auto s = make("instances", "linear forms at a known solution", "linear forms", "instances");
    // witness tuples taken from the search records with a large enough shift
    Json out = Json::array();
    for (LambdaKind kind : {plan_.shift_family, plan_.k_family}) {
      const LambdaFamily& fam = lambda_family(kind);
      const SolutionRecord* pick = nullptr;
      for (const auto& r : records_) {
        if (!r.degenerate && r.n >= r.k + static_cast<SeqIndex>(fam.min_shift) && r.n > r.m) {
          pick = &r;
          break;
        }
      }
      if (!pick) continue;
      const auto inst = lambda_instance(kind, {pick->n, pick->m, pick->k});
      const QSqrt5 v = lambda_value(inst);
      if (v == QSqrt5(0)) fail(s, fam.name + " vanishes at a witness");
      Json A = Json::array();
      for (const auto& a : inst.A) A.push_back(a.to_string());
      out.push_back(Json{{"family", fam.name},
                         {"n", pick->n}, {"m", pick->m}, {"k", pick->k},
                         {"d", inst.d},
                         {"B", to_decimal(inst.B)},
                         {"A", A},
                         {"lambda", v.to_string()},
                         {"nonvanishing", fam.nonvanishing_witness}});
    }
    s.outputs = Json{{"instances", out}};
    push(std::move(s));
  }

  void height_eta3() {
    const LambdaFamily& fam = k_fam();
    auto s = make("height_eta3", "height bound for the third algebraic number of " + fam.name, "heights", "height");
    const AffineA& a3 = fam.A.back();
    const bool eq1 = plan_.equation == Equation::FibLucas;
    const long s_max = 60;
    long checked = 0;
    for (long sh = fam.min_shift; sh <= s_max; ++sh) {
      for (long m = eq1 ? 1 : 0; m <= sh + 1; ++m) {
        const AlgElem left = eq1 ? AlgElem::fib(static_cast<SeqIndex>(m)) : AlgElem::lucas(static_cast<SeqIndex>(m));
        const AlgElem den = eq1 ? AlgElem::integer(1) - pow(AlgElem::alpha(), -sh) * AlgElem::sqrt5()
                                : AlgElem::integer(1) - pow(AlgElem::alpha(), -sh);
        const AlgElem eta = left * AlgElem::sqrt5() / den;
        const HeightBound h = height(eta, HeightMode::Rules);
        if (!certainly_less(Expr(2L) * h.value, a3.at(Expr(sh)), 4096)) {
          fail(s, "2 h(eta_3) exceeds A_3 at m=" + std::to_string(m) + " shift=" + std::to_string(sh));
        }
        ++checked;
      }
    }
    s.inputs = Json{{"family", fam.name},
                    {"A3_constant", a3.constant.to_string()},
                    {"A3_per_shift", a3.per_shift.to_string()},
                    {"A3_text", a3.text},
                    {"left", eq1 ? "F_m" : "L_m"},
                    {"denominator", eq1 ? "1 - alpha^(-s) sqrt5" : "1 - alpha^(-s)"},
                    {"m_max_rule", "m <= n-k+1"},
                    {"shift_range", Json::array({fam.min_shift, s_max})}};
    s.outputs = Json{{"checked", checked}};
    if (!fam.printed_A_last.empty()) {
      s.status = StepStatus::Discrepancy;
      s.details = "printed A_3 = " + fam.printed_A_last + " is below the rule bound 2h(eta_3); using " + a3.text;
      s.outputs["printed_A3"] = fam.printed_A_last;
    }
    push(std::move(s));
  }

  // (c) -------------------------------------------------------------
  void coefficient(LambdaKind kind, const std::string& plan_value, const std::string& id) {
    const LambdaFamily& fam = lambda_family(kind);
    auto s = make(id, "Matveev coefficient for " + fam.name, "Matveev lower bound", "matveev_coefficient");
    Json fixedA = Json::array();
    for (const auto& a : fam.A) {
      if (!a.varies()) fixedA.push_back(a.constant.to_string());
    }
    s.inputs = Json{{"family", fam.name},
                    {"t", fam.t},
                    {"field_degree", fam.field_degree},
                    {"fixed_A", fixedA},
                    {"tail_numerator", to_fraction_string(fam.tail_numerator)},
                    {"scale", fam.side == SmallSide::TwoK ? 2 : 1},
                    {"inequality", fam.inequality_text},
                    {"plan_value", plan_value}};
    const Expr c = family_coefficient(fam);
    const Interval iv = eval(c, 256);
    const Rational P = R(plan_value);
    s.outputs = Json{{"recomputed_lower", iv.lower_decimal(12)}, {"recomputed_upper", iv.upper_decimal(12)}};
    if (!(iv.upper_rational() <= P)) fail(s, "recomputed coefficient " + iv.upper_decimal(6) + " exceeds plan value " + plan_value);
    if (iv.upper_rational() < P * Rational(995, 1000)) {
      s.status = StepStatus::Discrepancy;
      s.details = "recomputed coefficient is more than 0.5% below the plan value";
    }
    push(std::move(s));
  }

  // a bound step: certify the plan value against the inequality
  SolvedBound bound_step(StepRecord& s, const BoundInequality& ineq, const std::string& plan_value) {
    s.inputs = bound_inputs(ineq, plan_value);
    const SolvedBound b = solve_bound(ineq);
    const Rational P = R(plan_value);
    s.outputs = Json{{"bound", to_decimal(b.bound)},
                     {"bound_sci", sci(b.bound)},
                     {"tight", b.tight_decimal},
                     {"tight_upper", to_fraction_string(b.tight_upper)},
                     {"holds_below", b.holds_below}};
    if (Rational(b.bound) > P) fail(s, "solved bound " + sci(b.bound) + " exceeds plan value " + plan_value);
    if (Rational(b.bound) * 10 < P) {
      s.status = StepStatus::Discrepancy;
      s.details = "plan value is more than a factor 10 above the solved bound";
    }
    return b;
  }

  void shift_bound() {
    auto s = make("shift_bound", "n - k bound when k <= m", "first linear form", "bound", "k <= m");
    const auto ineq = shift_bound_inequality(Expr(R(plan_.shift_coefficient)), plan_.shift_offset,
                                             "X - " + std::to_string(plan_.shift_offset) + " < " + plan_.shift_coefficient +
                                                 " (1 + log X), X = n - k");
    shift_solved_ = bound_step(s, ineq, plan_.shift_bound);
    push(std::move(s));
  }

  void case_k_le_m() {
    auto s = make("case_k_le_m", "n bound when k <= m", "case split", "case_split", "k <= m");
    // m < n-k+2 <= S+1 and n < m+k+8 <= 2m+8
    const BigNat S = integer_of(R(plan_.shift_bound));
    const BigNat chained = 2 * S + 8;
    const BigNat tight = 2 * integer_of(shift_solved_.tight_upper) + 8;
    s.inputs = Json{{"shift_bound", plan_.shift_bound}, {"rule", "n < 2S + 8"}, {"plan_value", plan_.case_split_bound}};
    s.outputs = Json{{"from_plan", to_decimal(chained)},
                     {"from_tight", to_decimal(tight)},
                     {"from_tight_rounded", sci(round_up_significant(Rational(tight), 2))}};
    if (Rational(chained) > R(plan_.case_split_bound)) fail(s, "2S + 8 exceeds the plan value");
    push(std::move(s));
  }

  void case_m_le_k() {
    auto s = make("case_m_le_k", "n bound when m <= k", "second linear form", "bound", "m <= k");
    const auto ineq = chained_bound_inequality(
        Expr(R(plan_.k_coefficient)), k_fam().A.back(), plan_.shift_offset, Expr(R(plan_.shift_coefficient)), plan_.k_slack,
        "n < 2k + " + std::to_string(plan_.k_slack) + ", k < " + plan_.k_coefficient + " (1 + log n) A_3(n-k), n-k < " +
            std::to_string(plan_.shift_offset) + " + " + plan_.shift_coefficient + " (1 + log n)");
    bound_step(s, ineq, plan_.chain_bound);
    push(std::move(s));
  }

  void combine() {
    auto s = make("n_upper", "n bound in either case", "case split", "combine");
    const Rational a = R(plan_.case_split_bound), b = R(plan_.chain_bound);
    n_upper_ = integer_of(std::max(a, b));
    s.inputs = Json{{"branches", Json::array({plan_.case_split_bound, plan_.chain_bound})}};
    s.outputs = Json{{"n_upper", to_decimal(n_upper_)}, {"n_upper_sci", sci(n_upper_)}};
    push(std::move(s));
  }

  // (d) -------------------------------------------------------------
  void legendre_lemma() {
    auto s = make("m_bound", "m <= " + std::to_string(plan_.m_lemma), "convergent argument", "legendre_lemma");
    // m > m_lemma: n-k >= m-1 >= m_lemma, so n-k-offset >= m_lemma - offset
    const long floor_w = plan_.m_lemma - plan_.shift_offset;
    s.inputs = Json{{"n_upper", to_decimal(n_upper_)},
                    {"m_lemma", plan_.m_lemma},
                    {"offset", plan_.shift_offset},
                    {"exponent", plan_.lemma_exponent},
                    {"gamma_numerator", 6},
                    {"legendre_plan", plan_.legendre_threshold},
                    {"amax_plan", plan_.amax_threshold}};
    if (floor_w < plan_.lemma_exponent) fail(s, "hypothesis does not reach the exponent");
    const LemmaReplay r = legendre_m_bound(n_upper_, plan_.lemma_exponent);
    auto cf = tau_inverse(64);
    Json quotients = Json::array();
    for (std::size_t i = 1; i <= r.amax.range_end + 1; ++i) quotients.push_back(to_decimal(cf->a(i)));
    s.outputs = Json{{"quotients", quotients},
                     {"range_end", r.amax.range_end},
                     {"q_range_end", to_decimal(cf->q(r.amax.range_end))},
                     {"q_next", to_decimal(cf->q(r.amax.range_end + 1))},
                     {"a_max", to_decimal(r.amax.value)},
                     {"a_max_index", r.amax.index},
                     {"legendre_lower", to_fraction_string(r.legendre_threshold)},
                     {"legendre_sci", to_scientific(r.legendre_threshold, 4)},
                     {"amax_lower", to_fraction_string(r.amax_threshold)},
                     {"amax_sci", to_scientific(r.amax_threshold, 4)},
                     {"hypothesis_floor", floor_w}};
    if (r.legendre_threshold < R(plan_.legendre_threshold) || r.amax_threshold < R(plan_.amax_threshold)) {
      fail(s, "thresholds below the plan values");
    }
    if (!(R(plan_.legendre_threshold) > Rational(n_upper_) && R(plan_.amax_threshold) > Rational(n_upper_))) {
      fail(s, "no contradiction with n_upper");
    }
    push(std::move(s));
  }

  void reduction_lemma() {
    auto s = make("m_bound", "m <= " + std::to_string(plan_.m_lemma), "reduction with constant mu", "reduction");
    const Expr mu = parse_expr(plan_.lemma_mu);
    const Expr A = Expr(plan_.lemma_A_numerator) / log(Expr::alpha());
    auto cf = tau(plan_.lemma_q_classical + 8);
    const std::size_t qi = plan_.lemma_q_classical + 1;
    s.inputs = Json{{"M", to_decimal(n_upper_)},
                    {"tau", tau_expr().to_string()},
                    {"mu", mu.to_string()},
                    {"A", A.to_string()},
                    {"B", Expr::alpha().to_string()},
                    {"q_index", qi},
                    {"q_classical", plan_.lemma_q_classical},
                    {"q", to_decimal(cf->q(qi))},
                    {"w_offset", plan_.shift_offset},
                    {"m_lemma", plan_.m_lemma},
                    {"plan_epsilon", plan_.lemma_epsilon},
                    {"plan_w", plan_.lemma_w}};
    if (cf->q(qi) <= 6 * n_upper_) fail(s, "q does not exceed 6M");
    ReductionProblem p{n_upper_, tau_expr(), mu, A, Expr::alpha(), "m bound"};
    const ReductionOutcome o = reduce(p, *cf, qi, opts_.precision_cap);
    const auto* r = std::get_if<Reduced>(&o);
    if (!r) fail(s, "epsilon is not positive");
    // m > m_lemma: n-k-offset >= m - 1 - offset >= m_lemma - offset
    const long floor_w = plan_.m_lemma - plan_.shift_offset;
    s.outputs = Json{{"epsilon_lower", to_fraction_string(r->epsilon_lower)},
                     {"epsilon_sci", to_scientific(r->epsilon_lower, 8)},
                     {"w_bound", to_decimal(r->w_bound)},
                     {"w_real_upper", r->w_decimal},
                     {"hypothesis_floor", floor_w}};
    if (r->w_bound > plan_.lemma_w) fail(s, "w bound above the plan value");
    if (BigNat(floor_w) < r->w_bound) fail(s, "m > m_lemma is not contradicted");
    if (r->epsilon_lower < R(plan_.lemma_epsilon)) {
      s.status = StepStatus::Discrepancy;
      s.details = "recomputed epsilon is below the plan value but still closes the step";
    }
    push(std::move(s));
  }

  void branch_closed() {
    auto s = make("branch_k_le_m", "k <= m branch closed by the search", "case split", "branch_closed", "k <= m");
    s.inputs = Json{{"m_lemma", plan_.m_lemma}, {"search_max", plan_.search_max}};
    s.outputs = Json{{"argument", "k <= m <= m_lemma <= search_max, so (m, k) lies in the searched box"}};
    if (static_cast<SeqIndex>(plan_.m_lemma) > plan_.search_max) fail(s, "m_lemma exceeds the search range");
    push(std::move(s));
  }

  // (e) -------------------------------------------------------------
  void refined() {
    auto s = make("refined_bound", "n bound with n - k <= m_lemma + 7", "second linear form", "bound", "m <= k");
    const long s_max = plan_.m_lemma + 7;
    const auto ineq = refined_bound_inequality(Expr(R(plan_.k_coefficient)), k_fam().A.back(), s_max, plan_.k_slack,
                                               "n < 2k + " + std::to_string(plan_.k_slack) + ", k < " + plan_.k_coefficient +
                                                   " (1 + log n) A_3(" + std::to_string(s_max) + ")");
    bound_step(s, ineq, plan_.refined_bound);
    s.inputs["shift_max"] = s_max;
    M_ = integer_of(R(plan_.refined_bound));
    s.outputs["n_upper"] = to_decimal(M_);
    push(std::move(s));
  }

  // (f) -------------------------------------------------------------
  void sweep_step() {
    auto s = make("reduction_sweep", "reduction over the (m, n-k) grid", "reduction", "sweep", "m <= k");
    auto cf = tau(plan_.q_classical + 16);
    const std::size_t qi = plan_.q_classical + 1;
    const Expr A = Expr(plan_.A_numerator) / log(Expr::alpha());
    ReductionProblem shared{M_, tau_expr(), Expr(0L), A, Expr::alpha(), "sweep"};
    const auto grid = triangular_grid(plan_.grid_m0, plan_.grid_m1, plan_.grid_s0, plan_.grid_s_end_offset);
    s.inputs = Json{{"M", to_decimal(M_)},
                    {"tau", tau_expr().to_string()},
                    {"mu_template", plan_.mu_template},
                    {"A", A.to_string()},
                    {"B", Expr::alpha().to_string()},
                    {"q_index", qi},
                    {"q_classical", plan_.q_classical},
                    {"q", to_decimal(cf->q(qi))},
                    {"grid", Json{{"m0", plan_.grid_m0}, {"m1", plan_.grid_m1}, {"s0", plan_.grid_s0},
                                  {"s_end_offset", plan_.grid_s_end_offset}}},
                    {"plan_epsilon", plan_.printed_epsilon},
                    {"plan_w", plan_.printed_w},
                    {"w_inclusive", plan_.w_inclusive}};
    if (cf->q(qi) <= 6 * M_) fail(s, "q does not exceed 6M");
    SweepOptions so;
    so.threads = opts_.threads;
    so.max_bits = opts_.precision_cap;
    so.congruence_first = plan_.excluded_shifts;
    const std::string tmpl = plan_.mu_template;
    const SweepResult res = sweep([&](long m, long sh) { return mu_from_template(tmpl, m, sh); }, grid, shared, *cf, qi, so);
    if (!res.unresolved.empty()) fail(s, "unresolved grid points, first: " + res.unresolved.front());
    if (!res.minimum || !res.w_bound) fail(s, "no reduced grid point");
    Json rows = Json::array();
    for (const auto& row : res.rows) {
      if (const auto* r = std::get_if<Reduced>(&row.outcome)) {
        rows.push_back(Json::array({row.point.m, row.point.s, "reduced", r->q_index, to_fraction_string(r->epsilon_lower)}));
      } else if (const auto* x = std::get_if<Excluded>(&row.outcome)) {
        rows.push_back(Json::array({row.point.m, row.point.s, "excluded", qi, x->reason}));
      }
    }
    std::set<long> fail_shifts;
    Json failures = Json::array();
    for (const auto& f : res.failures) {
      fail_shifts.insert(f.s);
      failures.push_back(Json::array({f.m, f.s}));
    }
    std::string wdec;
    const BigNat w_check = reduction_w_bound(A, Expr::alpha(), cf->q(qi), res.minimum->epsilon_lower, &wdec);
    w_bound_ = *res.w_bound;
    s.outputs = Json{{"rows", rows},
                     {"failures", failures},
                     {"failing_shifts", std::vector<long>(fail_shifts.begin(), fail_shifts.end())},
                     {"min_epsilon", to_fraction_string(res.minimum->epsilon_lower)},
                     {"min_epsilon_sci", to_scientific(res.minimum->epsilon_lower, 12)},
                     {"argmin", Json::array({res.minimum->point.m, res.minimum->point.s})},
                     {"w_bound", to_decimal(w_bound_)},
                     {"w_real_upper", wdec}};
    (void)w_check;
    const std::set<long> expected(plan_.excluded_shifts.begin(), plan_.excluded_shifts.end());
    const BigNat w_limit = plan_.w_inclusive ? BigNat(plan_.printed_w + 1) : BigNat(plan_.printed_w);
    if (w_bound_ > w_limit) fail(s, "w bound " + to_decimal(w_bound_) + " above the plan value");
    std::vector<std::string> issues;
    if (fail_shifts != expected) issues.push_back("failing shifts differ from the plan");
    if (res.minimum->epsilon_lower < R(plan_.printed_epsilon)) issues.push_back("minimum epsilon below the plan value");
    if (!issues.empty()) {
      s.status = StepStatus::Discrepancy;
      for (const auto& i : issues) s.details += (s.details.empty() ? "" : "; ") + i;
    }
    sweep_failing_shifts_ = fail_shifts;
    push(std::move(s));
  }

  // (g) -------------------------------------------------------------
  void congruence() {
    auto s = make("congruence", "shifts removed modulo 5", "periodicity", "congruence", "m <= k");
    const std::uint64_t period = pisano_period(5);
    Json residues = Json::array();
    for (std::uint64_t t = 0; t < period; ++t) residues.push_back(BigNat(fib(t) % 5).get_ui());
    Json shifts = Json::array();
    for (long sh : plan_.excluded_shifts) {
      const ReductionOutcome o = exclude_by_congruence(static_cast<std::uint64_t>(sh));
      shifts.push_back(Json{{"shift", sh}, {"reason", std::get<Excluded>(o).reason}});
    }
    for (long f : sweep_failing_shifts_) {
      if (std::find(plan_.excluded_shifts.begin(), plan_.excluded_shifts.end(), f) == plan_.excluded_shifts.end()) {
        fail(s, "failing shift " + std::to_string(f) + " is not excluded");
      }
    }
    s.inputs = Json{{"modulus", 5}, {"shifts", plan_.excluded_shifts},
                    {"argument", "10^d L_m = 0 mod 5 for d >= 1, so F_n = F_k mod 5 with n = k + shift"}};
    s.outputs = Json{{"period", period}, {"residues", residues}, {"excluded", shifts}};
    push(std::move(s));
  }

  // (h) -------------------------------------------------------------
  void k_bound() {
    auto s = make("k_bound", "k bound from the reduction", "reduction", "k_bound", "m <= k");
    // 2k < W  =>  k <= (W-1)/2
    const BigNat W = w_bound_;
    BigNat kmax;
    mpz_fdiv_q_ui(kmax.get_mpz_t(), BigNat(W - 1).get_mpz_t(), 2);
    k_bound_ = kmax + 1;
    const BigNat n_final = 2 * kmax + plan_.k_slack;  // n < 2k + slack
    s.inputs = Json{{"w_bound", to_decimal(W)}, {"k_slack", plan_.k_slack}, {"plan_k_bound", plan_.printed_k_bound}};
    s.outputs = Json{{"k_bound", to_decimal(k_bound_)}, {"n_upper", to_decimal(n_final)}};
    if (k_bound_ > plan_.printed_k_bound) fail(s, "k bound above the plan value");
    push(std::move(s));
  }

  void contradiction() {
    auto s = make("contradiction", "k bound contradicts max{m, k} > search range", "conclusion", "contradiction", "m <= k");
    // a solution outside the search has max{m,k} >= search_max + 1; with m <= m_lemma <= search_max that is k
    const BigNat need = BigNat(static_cast<unsigned long>(plan_.search_max)) + 1;
    s.inputs = Json{{"search_max", plan_.search_max}, {"m_lemma", plan_.m_lemma}, {"k_bound", to_decimal(k_bound_)}};
    s.outputs = Json{{"k_min_outside_search", to_decimal(need)}};
    if (static_cast<SeqIndex>(plan_.m_lemma) > plan_.search_max) fail(s, "m_lemma outside the search range");
    if (k_bound_ > need) fail(s, "k bound does not contradict k >= search_max + 1");
    push(std::move(s));
  }

  void gap_closure() {
    auto s = make("gap_closure", "residual box search", "conclusion", "gap_closure", "m <= k");
    const SeqIndex kb = k_bound_.get_ui();
    const SeqIndex shift_bound = static_cast<SeqIndex>(plan_.m_lemma) + 8;
    auto recs = close_gap(plan_.equation, kb, static_cast<SeqIndex>(plan_.m_lemma), shift_bound, opts_.threads);
    Json vals = Json::array();
    for (const auto& v : value_set(recs)) {
      vals.push_back(to_decimal(v));
      if (std::find(values_.begin(), values_.end(), v) == values_.end()) fail(s, "new solution " + to_decimal(v));
    }
    s.inputs = Json{{"equation", eq_number()}, {"k_bound", kb}, {"m_bound", plan_.m_lemma}, {"shift_bound", shift_bound}};
    s.outputs = Json{{"record_count", recs.size()}, {"values", vals}};
    push(std::move(s));
  }

  const ProofPlan& plan_;
  CertifyOptions opts_;
  Certificate cert_;
  std::vector<SolutionRecord> records_;
  std::vector<BigNat> values_;
  SolvedBound shift_solved_{};
  BigNat n_upper_, M_, w_bound_, k_bound_;
  std::set<long> sweep_failing_shifts_;
};

}  // namespace

Certificate certify(const ProofPlan& plan, const CertifyOptions& opts) {
  if (plan.theorem != 1 && plan.theorem != 2) throw std::invalid_argument("certify: theorem must be 1 or 2");
  Runner r(plan, opts);
  return r.run();
}

}  // namespace concat
