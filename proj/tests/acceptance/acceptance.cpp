// One PASS/FAIL line per acceptance criterion; exit status 1 when any line fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "../support/random_expr.hpp"
#include "../support/reduction_oracle.hpp"
#include "concat/bigseq.hpp"
#include "concat/contfrac.hpp"
#include "concat/linforms.hpp"
#include "concat/prover.hpp"
#include "concat/qsqrt5.hpp"
#include "concat/reduction.hpp"
#include "concat/search.hpp"

using namespace concat;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) note << "; ";
      else note.str("");
      ok = false;
      note << what;
    }
  }
};

std::string join(const std::vector<BigNat>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + to_decimal(x);
  return "{" + s + "}";
}

Json& step(Json& cert, const std::string& id) {
  for (auto& s : cert["steps"]) {
    if (s["id"] == id) return s;
  }
  throw std::runtime_error("missing step " + id);
}

Rational R(const char* s) { return parse_rational(s); }

void search_criterion(Verdict& v, Equation eq, const std::vector<long>& expected) {
  const auto t0 = Clock::now();
  const auto vals = value_set(search_range(eq, 200, 200));
  const double secs = seconds_since(t0);
  std::vector<BigNat> want(expected.begin(), expected.end());
  v.expect(vals == want, "values " + join(vals));
  v.expect(secs < 10, "runtime " + std::to_string(secs) + " s");
  if (v.ok) v.note << "values " << join(vals) << " in " << secs << " s";
}

void continued_fraction(Verdict& v) {
  const auto t0 = Clock::now();
  const ContinuedFraction inv = expand(tau_inverse_expr(), 80, 4096);
  std::vector<long> five;
  for (std::size_t i = 1; i <= 5; ++i) five.push_back(inv.a(i).get_si());
  v.expect(five == std::vector<long>{0, 4, 1, 3, 1}, "first quotients");
  const ContinuedFraction t = expand(tau_expr(), 80, 4096);
  v.expect(to_decimal(t.classical_q(60)) == "2568762252997982327345614176552", "q60 = " + to_decimal(t.classical_q(60)));
  const auto mx = max_partial_quotient(inv, R("7e26").get_num());
  v.expect(mx.value == 106 && mx.index == 37, "max quotient " + to_decimal(mx.value) + " at " + std::to_string(mx.index));
  const double secs = seconds_since(t0);
  v.expect(secs < 30, "runtime");
  if (v.ok) v.note << "[0,4,1,3,1], q60 exact, a_37 = 106, " << secs << " s";
}

void coefficients(Verdict& v) {
  std::ostringstream shown;
  for (LambdaKind k : {LambdaKind::L1, LambdaKind::L2, LambdaKind::L3}) {
    const auto& fam = lambda_family(k);
    const Interval c = eval(family_coefficient(fam), 256);
    const Rational printed = parse_rational(fam.printed_coefficient);
    v.expect(c.upper_rational() <= printed, fam.name + " above printed");
    v.expect(c.lower_rational() >= printed * Rational(995, 1000), fam.name + " more than 0.5% below");
    shown << fam.name << " " << c.upper_decimal(6) << " <= " << fam.printed_coefficient << "  ";
  }
  if (v.ok) v.note << shown.str();
}

void fixpoints(Verdict& v, const Certificate& c1, const Certificate& c2) {
  Json j1 = c1.to_json(), j2 = c2.to_json();
  struct Row {
    Json* cert;
    const char* id;
    const char* printed;
  };
  const Row rows[] = {{&j1, "shift_bound", "8e11"},   {&j1, "case_k_le_m", "1.7e12"}, {&j1, "case_m_le_k", "7e26"},
                      {&j1, "refined_bound", "4.5e16"}, {&j2, "case_m_le_k", "2.5e29"}, {&j2, "refined_bound", "4.6e16"}};
  std::ostringstream shown;
  for (const auto& r : rows) {
    const Json& out = step(*r.cert, r.id)["outputs"];
    const Rational printed = R(r.printed);
    Rational solved, tight;
    if (std::string(r.id) == "case_k_le_m") {
      solved = parse_rational(out["from_plan"].get<std::string>());
      tight = parse_rational(out["from_tight"].get<std::string>());
    } else {
      solved = parse_rational(out["bound"].get<std::string>());
      tight = parse_rational(out["tight_upper"].get<std::string>());
    }
    v.expect(solved <= printed, std::string(r.id) + " exceeds " + r.printed);
    v.expect(tight <= solved && printed < 10 * tight, std::string(r.id) + " not within an order of magnitude");
    shown << r.printed << " (tight " << to_scientific(tight, 3) << ") ";
  }
  if (v.ok) v.note << shown.str();
}

void reductions(Verdict& v, const Certificate& c1, const Certificate& c2, double secs) {
  Json j1 = c1.to_json(), j2 = c2.to_json();
  const Json& s1 = step(j1, "reduction_sweep")["outputs"];
  v.expect(parse_rational(s1["min_epsilon"].get<std::string>()) >= R("0.00034"), "first sweep epsilon");
  v.expect(s1["argmin"] == Json::array({50, 20}), "first sweep argmin");
  v.expect(s1["w_bound"] == "170" && step(j1, "k_bound")["outputs"]["k_bound"] == "85", "first sweep k bound");
  const Json& m2 = step(j2, "m_bound")["outputs"];
  v.expect(parse_rational(m2["epsilon_lower"].get<std::string>()) > R("0.017775"), "constant-mu epsilon");
  v.expect(m2["w_bound"] == "160", "constant-mu w bound");
  const Json& s2 = step(j2, "reduction_sweep")["outputs"];
  v.expect(s2["w_bound"] == "233" && step(j2, "k_bound")["outputs"]["k_bound"] == "117", "second sweep k bound");
  v.expect(s2["failing_shifts"] == Json::array({4, 8}), "failing shifts " + s2["failing_shifts"].dump());
  v.expect(secs < 1200, "runtime");
  if (v.ok) {
    v.note << "eps " << s1["min_epsilon_sci"].get<std::string>() << " at (50,20), k < 85; eps "
           << m2["epsilon_sci"].get<std::string>() << ", w < 160; eps " << s2["min_epsilon_sci"].get<std::string>()
           << ", 2k <= 232, k < 117, failures " << s2["failures"].dump() << "; " << secs << " s";
  }
}

void congruences(Verdict& v) {
  v.expect(residue_class_excludes(4, 5), "shift 4");
  v.expect(residue_class_excludes(8, 5), "shift 8");
  v.expect(pisano_period(5) == 20, "period");
  if (v.ok) v.note << "shifts 4 and 8 excluded, period 20";
}

void end_to_end(Verdict& v, const Certificate& c1, const Certificate& c2) {
  v.expect(c1.conclusion && *c1.conclusion == std::vector<BigNat>{1, 2, 3, 13, 21, 34}, "first conclusion");
  v.expect(c2.conclusion && *c2.conclusion == std::vector<BigNat>{13, 21}, "second conclusion");
  for (const Certificate* c : {&c1, &c2}) {
    const Json j = Json::parse(c->to_json().dump());
    const CheckReport rep = check_certificate(j);
    v.expect(rep.ok, "check " + std::to_string(c->theorem) + ": " + (rep.failures.empty() ? "" : rep.failures.front()));
  }
  if (v.ok) v.note << "Verified " << join(*c1.conclusion) << " and " << join(*c2.conclusion) << ", both replayed";
}

void properties(Verdict& v) {
  int binet = 0;
  for (long n = 1; n <= 1000; ++n) {
    const QSqrt5 f(Rational(fib(static_cast<SeqIndex>(n)))), l(Rational(lucas(static_cast<SeqIndex>(n))));
    const bool ok = (f - alpha_power(n - 2)).sign() >= 0 && (alpha_power(n - 1) - f).sign() >= 0 &&
                    (l - alpha_power(n - 1)).sign() >= 0 && (QSqrt5(2) * alpha_power(n) - l).sign() >= 0;
    binet += ok ? 0 : 1;
  }
  v.expect(binet == 0, std::to_string(binet) + " Binet failures");

  int identity = 0;
  for (SeqIndex k = 1; k <= 1000; ++k) identity += lucas(k) == fib(k + 1) + fib(k - 1) ? 0 : 1;
  v.expect(identity == 0, "Lucas identity");

  const auto t = tau(210);
  int conv = 0;
  for (std::size_t i = 2; i <= 200; ++i) {
    const BigNat p2 = i >= 3 ? t->p(i - 2) : BigNat(1), q2 = i >= 3 ? t->q(i - 2) : BigNat(0);
    BigNat g;
    mpz_gcd(g.get_mpz_t(), t->p(i).get_mpz_t(), t->q(i).get_mpz_t());
    const BigNat det = t->p(i) * t->q(i - 1) - t->p(i - 1) * t->q(i);
    const bool below = compare(Expr(Rational(t->p(i), t->q(i))), tau_expr()) == Ordering::Less;
    const bool ok = t->p(i) == t->a(i) * t->p(i - 1) + p2 && t->q(i) == t->a(i) * t->q(i - 1) + q2 && g == 1 &&
                    det == (i % 2 == 0 ? 1 : -1) && below == (i % 2 == 1);
    conv += ok ? 0 : 1;
  }
  v.expect(conv == 0, std::to_string(conv) + " convergent failures");

  const auto oracle = concat::testing::run_oracle(100, 42);
  v.expect(oracle.reduced >= 100 && oracle.violations == 0 && oracle.undecided == 0,
           "oracle reduced " + std::to_string(oracle.reduced) + ", violations " + std::to_string(oracle.violations) +
               (oracle.first_violation.empty() ? "" : " (" + oracle.first_violation + ")"));

  concat::testing::ExprGen gen(2026);
  int nested = 0, broken = 0;
  while (nested + broken < 10000) {
    const Expr e = gen.any(4);
    try {
      const Interval coarse = eval(e, 64), fine = eval(e, 256);
      if (fine.subset_of(coarse)) ++nested;
      else ++broken;
    } catch (const DomainError&) {
    }
  }
  v.expect(broken == 0, std::to_string(broken) + " nesting failures");
  if (v.ok) v.note << "Binet n<=1000, L_k identity k<=1000, 200 convergents, " << oracle.reduced
                   << " oracle problems, 10000 nested expressions";
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Verdict>> results;
  auto run = [&](const std::string& name, const std::function<void(Verdict&)>& body) {
    Verdict v;
    try {
      body(v);
    } catch (const std::exception& e) {
      v.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (v.ok ? "PASS" : "FAIL") << "  " << name << "  " << v.note.str() << std::endl;
    results.emplace_back(name, std::move(v));
  };

  std::optional<Certificate> c1, c2;
  double certify_secs = 0;
  try {
    const auto t0 = Clock::now();
    c1 = certify(1);
    c2 = certify(2);
    certify_secs = seconds_since(t0);
  } catch (const std::exception& e) {
    std::cout << "certification raised: " << e.what() << std::endl;
  }
  auto need = [&](Verdict& v) {
    if (!c1 || !c2) throw std::runtime_error("certification did not complete");
    (void)v;
  };

  run("1 first equation search", [](Verdict& v) { search_criterion(v, Equation::FibLucas, {1, 2, 3, 13, 21, 34}); });
  run("2 second equation search", [](Verdict& v) { search_criterion(v, Equation::LucasFib, {13, 21}); });
  run("3 continued fractions", continued_fraction);
  run("4 Matveev coefficients", coefficients);
  run("5 fixpoint bounds", [&](Verdict& v) {
    need(v);
    fixpoints(v, *c1, *c2);
  });
  run("6 reductions", [&](Verdict& v) {
    need(v);
    reductions(v, *c1, *c2, certify_secs);
  });
  run("7 congruence exclusions", congruences);
  run("8 end to end", [&](Verdict& v) {
    need(v);
    end_to_end(v, *c1, *c2);
  });
  run("9 property suites", properties);

  bool all = true;
  for (const auto& [name, v] : results) all = all && v.ok;
  return all ? 0 : 1;
}
