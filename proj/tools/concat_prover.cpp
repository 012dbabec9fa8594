#include <chrono>
#include <fstream>
#include <iostream>
#include <regex>

#include "CLI11.hpp"
#include "concat/bigseq.hpp"
#include "concat/contfrac.hpp"
#include "concat/linforms.hpp"
#include "concat/prover.hpp"
#include "concat/realexpr.hpp"
#include "concat/reduction.hpp"
#include "concat/search.hpp"

using namespace concat;

namespace {

Json record_json(const SolutionRecord& r) {
  return Json{{"equation", static_cast<int>(r.equation)}, {"n", r.n}, {"m", r.m}, {"k", r.k}, {"d", r.d},
              {"value", to_decimal(r.value)}, {"degenerate", r.degenerate}};
}

int run_seq(const std::string& kind, std::uint64_t n) {
  if (kind == "fib") {
    std::cout << to_decimal(fib(n)) << "\n";
  } else if (kind == "lucas") {
    std::cout << to_decimal(lucas(n)) << "\n";
  } else if (kind == "pisano") {
    std::cout << pisano_period(n) << "\n";
  } else {
    std::cerr << "seq: expected fib, lucas or pisano\n";
    return 2;
  }
  return 0;
}

int run_eval(const std::string& text, long bits) {
  const Interval iv = eval(parse_expr(text), bits);
  std::cout << iv.lower_decimal() << "\n" << iv.upper_decimal() << "\n";
  return 0;
}

int run_cfrac(const std::string& text, std::size_t terms, bool json) {
  const ContinuedFraction cf = expand(parse_expr(text), terms);
  if (json) {
    Json q = Json::array(), conv = Json::array();
    for (std::size_t i = 1; i <= cf.size(); ++i) {
      q.push_back(to_decimal(cf.a(i)));
      conv.push_back(Json{{"p", to_decimal(cf.p(i))}, {"q", to_decimal(cf.q(i))}});
    }
    std::cout << Json{{"target", cf.target().to_string()}, {"certified_bits", cf.certified_bits()},
                      {"terminated", cf.terminated()}, {"quotients", q}, {"convergents", conv}}
                     .dump(2)
              << "\n";
    return 0;
  }
  std::cout << "[";
  for (std::size_t i = 1; i <= cf.size(); ++i) std::cout << (i > 1 ? ", " : "") << to_decimal(cf.a(i));
  std::cout << "]\n";
  for (std::size_t i = 1; i <= cf.size(); ++i) {
    std::cout << i << "  " << to_decimal(cf.p(i)) << "/" << to_decimal(cf.q(i)) << "\n";
  }
  return 0;
}

Json solved_json(const SolvedBound& b) {
  return Json{{"bound", to_decimal(b.bound)}, {"bound_sci", to_scientific(Rational(b.bound), 2)},
              {"tight", b.tight_decimal}, {"holds_below", b.holds_below}};
}

Json ineq_json(const BoundInequality& b) {
  Json c = Json::array();
  for (const auto& e : b.coeffs) c.push_back(e.to_string());
  return Json{{"text", b.text}, {"coeffs", c}};
}

int run_bound(int lambda, bool chain, bool json) {
  if (lambda < 1 || lambda > 4) {
    std::cerr << "bound: --lambda must be 1..4\n";
    return 2;
  }
  const LambdaFamily& fam = lambda_family(static_cast<LambdaKind>(lambda));
  const ProofPlan plan = default_plan(fam.equation);
  const Expr coef = family_coefficient(fam);
  const Interval civ = eval(coef, 256);
  Json out{{"family", fam.name},
           {"inequality", fam.inequality_text},
           {"coefficient_lower", civ.lower_decimal(10)},
           {"coefficient_upper", civ.upper_decimal(10)},
           {"printed", fam.printed_coefficient}};
  std::vector<std::pair<std::string, SolvedBound>> lines;
  if (fam.side == SmallSide::ShiftMinusOffset) {
    const auto ineq = shift_bound_inequality(Expr(parse_rational(fam.printed_coefficient)), fam.offset,
                                             "X - " + std::to_string(fam.offset) + " < C (1 + log X)");
    const auto b = solve_bound(ineq);
    out["shift_bound"] = {{"inequality", ineq_json(ineq)}, {"result", solved_json(b)}};
    lines.push_back({"n - k", b});
  } else {
    const Expr c = Expr(parse_rational(fam.printed_coefficient));
    const long s_max = plan.m_lemma + 7;
    const auto refined = refined_bound_inequality(c, fam.A.back(), s_max, plan.k_slack,
                                                  "n < 2k + " + std::to_string(plan.k_slack) + " with n-k <= " +
                                                      std::to_string(s_max));
    const auto b = solve_bound(refined);
    out["refined_bound"] = {{"inequality", ineq_json(refined)}, {"result", solved_json(b)}};
    lines.push_back({"n (n-k <= " + std::to_string(s_max) + ")", b});
    if (chain) {
      const auto ineq = chained_bound_inequality(c, fam.A.back(), plan.shift_offset,
                                                 Expr(parse_rational(plan.shift_coefficient)), plan.k_slack,
                                                 "n < 2k + slack with the n-k bound substituted");
      const auto cb = solve_bound(ineq);
      out["chained_bound"] = {{"inequality", ineq_json(ineq)}, {"result", solved_json(cb)}};
      lines.push_back({"n (chained)", cb});
    }
  }
  if (json) {
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << fam.name << " coefficient " << civ.upper_decimal(6) << " (printed " << fam.printed_coefficient << ")\n";
  for (const auto& [what, b] : lines) {
    std::cout << what << " < " << to_scientific(Rational(b.bound), 2) << "  (tight " << b.tight_decimal << ")\n";
  }
  return 0;
}

int run_reduce(int theorem, const std::string& grid_text, bool json, unsigned threads) {
  const ProofPlan plan = default_plan(theorem);
  std::vector<GridPoint> grid;
  if (grid_text.empty()) {
    grid = triangular_grid(plan.grid_m0, plan.grid_m1, plan.grid_s0, plan.grid_s_end_offset);
  } else {
    static const std::regex re(R"((\d+)\.\.(\d+),(\d+)\.\.(\d+))");
    std::smatch mt;
    if (!std::regex_match(grid_text, mt, re)) {
      std::cerr << "reduce: --grid must look like m0..m1,s0..s1\n";
      return 2;
    }
    grid = rectangular_grid(std::stol(mt[1]), std::stol(mt[2]), std::stol(mt[3]), std::stol(mt[4]));
  }
  auto cf = tau(plan.q_classical + 16);
  const std::size_t qi = plan.q_classical + 1;
  const Expr A = Expr(plan.A_numerator) / log(Expr::alpha());
  const BigNat M = parse_rational(plan.refined_bound).get_num();
  ReductionProblem shared{M, tau_expr(), Expr(0L), A, Expr::alpha(), "theorem " + std::to_string(theorem)};
  SweepOptions so;
  so.threads = threads;
  so.congruence_first = plan.excluded_shifts;
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult res =
      sweep([&](long m, long s) { return mu_from_template(plan.mu_template, m, s); }, grid, shared, *cf, qi, so);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Json rows = Json::array();
  for (const auto& row : res.rows) {
    Json r{{"m", row.point.m}, {"shift", row.point.s}, {"status", outcome_status(row.outcome)}};
    if (const auto* red = std::get_if<Reduced>(&row.outcome)) {
      r["epsilon_lower"] = to_fraction_string(red->epsilon_lower);
      r["q_index"] = red->q_index;
    }
    r["failed_at_primary"] = row.failed_at_primary;
    rows.push_back(std::move(r));
  }
  Json failures = Json::array();
  for (const auto& f : res.failures) failures.push_back(Json::array({f.m, f.s}));
  Json summary{{"theorem", theorem},
               {"M", to_decimal(M)},
               {"q_index", qi},
               {"q", to_decimal(cf->q(qi))},
               {"points", grid.size()},
               {"failures", failures},
               {"seconds", secs}};
  if (res.minimum) {
    summary["min_epsilon"] = to_fraction_string(res.minimum->epsilon_lower);
    summary["min_epsilon_sci"] = to_scientific(res.minimum->epsilon_lower, 12);
    summary["argmin"] = Json::array({res.minimum->point.m, res.minimum->point.s});
  }
  if (res.w_bound) summary["w_bound"] = to_decimal(*res.w_bound);
  if (json) {
    summary["rows"] = rows;
    std::cout << summary.dump(2) << "\n";
    return res.unresolved.empty() ? 0 : 1;
  }
  std::cout << "grid points " << grid.size() << ", q = q_" << qi << " = " << to_decimal(cf->q(qi)) << "\n";
  if (res.minimum) {
    std::cout << "min epsilon " << to_scientific(res.minimum->epsilon_lower, 12) << " at (m, n-k) = ("
              << res.minimum->point.m << ", " << res.minimum->point.s << ")\n";
  } else {
    std::cout << "min epsilon: none (empty grid)\n";
  }
  std::cout << "failures at primary q:";
  for (const auto& f : res.failures) std::cout << " (" << f.m << ", " << f.s << ")";
  std::cout << "\n";
  if (res.w_bound) std::cout << "w < " << to_decimal(*res.w_bound) << "\n";
  for (const auto& u : res.unresolved) std::cout << "unresolved: " << u << "\n";
  std::cout << "time " << secs << " s\n";
  return res.unresolved.empty() ? 0 : 1;
}

int run_search(int eq, std::uint64_t mmax, std::uint64_t kmax, bool json) {
  if (eq != 1 && eq != 2) {
    std::cerr << "search: --eq must be 1 or 2\n";
    return 2;
  }
  const auto recs = search_range(static_cast<Equation>(eq), mmax, kmax);
  if (json) {
    Json arr = Json::array();
    for (const auto& r : recs) arr.push_back(record_json(r));
    std::cout << arr.dump(2) << "\n";
    return 0;
  }
  for (const auto& r : recs) {
    std::cout << "F_" << r.n << " = " << to_decimal(r.value) << "  (m=" << r.m << ", k=" << r.k << ", d=" << r.d
              << (r.degenerate ? ", degenerate" : "") << ")\n";
  }
  std::cout << "values:";
  for (const auto& v : value_set(recs)) std::cout << " " << to_decimal(v);
  std::cout << "\n";
  return 0;
}

int run_certify(int theorem, const std::string& out, long cap, unsigned threads) {
  CertifyOptions opts;
  opts.precision_cap = cap;
  opts.threads = threads;
  try {
    const Certificate cert = certify(theorem, opts);
    const Json j = cert.to_json();
    if (!out.empty()) {
      std::ofstream f(out);
      f << j.dump(1) << "\n";
      if (!f) {
        std::cerr << "certify: cannot write " << out << "\n";
        return 2;
      }
    }
    for (const auto& s : cert.steps) {
      std::cout << status_name(s.status) << "  " << s.id << "  " << s.label;
      if (s.outputs.contains("bound_sci")) std::cout << "  < " << s.outputs["bound_sci"].get<std::string>();
      if (!s.details.empty()) std::cout << "  [" << s.details << "]";
      std::cout << "\n";
    }
    std::cout << "conclusion: Verified {";
    bool first = true;
    for (const auto& v : *cert.conclusion) {
      std::cout << (first ? "" : ", ") << to_decimal(v);
      first = false;
    }
    std::cout << "}\n";
    return 0;
  } catch (const StepFailed& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}

int run_check(const std::string& path, long cap) {
  std::ifstream f(path);
  if (!f) {
    std::cerr << "check: cannot read " << path << "\n";
    return 2;
  }
  Json j;
  try {
    j = Json::parse(f);
  } catch (const std::exception& e) {
    std::cerr << "check: " << e.what() << "\n";
    return 2;
  }
  const CheckReport rep = check_certificate(j, cap);
  for (const auto& l : rep.log) std::cout << l << "\n";
  for (const auto& l : rep.failures) std::cout << "FAILED " << l << "\n";
  if (!rep.ok) return 1;
  std::cout << "certificate replayed: conclusion {";
  for (std::size_t i = 0; i < rep.conclusion.size(); ++i) std::cout << (i ? ", " : "") << to_decimal(rep.conclusion[i]);
  std::cout << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified replay of the Fibonacci/Lucas concatenation proofs"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0: all cores)");

  auto* seq = app.add_subcommand("seq", "exact Fibonacci/Lucas values and Pisano periods");
  std::string seq_kind;
  std::uint64_t seq_n = 0;
  seq->add_option("kind", seq_kind, "fib | lucas | pisano")->required();
  seq->add_option("n", seq_n, "index or modulus")->required();

  auto* ev = app.add_subcommand("eval", "certified interval of an expression");
  std::string ev_text;
  long ev_bits = 128;
  ev->add_option("expr", ev_text, "prefix expression, e.g. \"(div (log 10) (log alpha))\"")->required();
  ev->add_option("--bits", ev_bits, "working precision")->check(CLI::Range(16L, 1L << 22));

  auto* cfc = app.add_subcommand("cfrac", "certified continued fraction expansion");
  std::string cf_text;
  std::size_t cf_terms = 20;
  bool cf_json = false;
  cfc->add_option("expr", cf_text, "prefix expression")->required();
  cfc->add_option("--terms", cf_terms, "number of partial quotients");
  cfc->add_flag("--json", cf_json);

  auto* bd = app.add_subcommand("bound", "Matveev coefficient and solved bound");
  int bd_lambda = 1;
  bool bd_chain = false, bd_json = false;
  bd->add_option("--lambda", bd_lambda, "linear form 1..4")->required();
  bd->add_flag("--chain", bd_chain, "also solve the chained bound");
  bd->add_flag("--json", bd_json);

  auto* rd = app.add_subcommand("reduce", "reduction sweep");
  int rd_theorem = 1;
  std::string rd_grid;
  bool rd_json = false;
  rd->add_option("--theorem", rd_theorem, "1 or 2")->required()->check(CLI::Range(1, 2));
  rd->add_option("--grid", rd_grid, "m0..m1,s0..s1");
  rd->add_flag("--json", rd_json);

  auto* sr = app.add_subcommand("search", "exhaustive search");
  int sr_eq = 1;
  std::uint64_t sr_m = 200, sr_k = 200;
  bool sr_json = false;
  sr->add_option("--eq", sr_eq, "1: F_n = F_m || L_k, 2: F_n = L_m || F_k")->required();
  sr->add_option("--mmax", sr_m, "largest m (inclusive)");
  sr->add_option("--kmax", sr_k, "largest k (inclusive)");
  sr->add_flag("--json", sr_json);

  auto* ce = app.add_subcommand("certify", "full proof replay");
  int ce_theorem = 1;
  std::string ce_out;
  long ce_cap = kDefaultPrecisionCap;
  ce->add_option("--theorem", ce_theorem, "1 or 2")->required()->check(CLI::Range(1, 2));
  ce->add_option("--out", ce_out, "certificate JSON path");
  ce->add_option("--precision-cap", ce_cap, "largest working precision in bits");

  auto* ck = app.add_subcommand("check", "independent certificate replay");
  std::string ck_path;
  long ck_cap = kDefaultPrecisionCap;
  ck->add_option("certificate", ck_path, "certificate JSON")->required();
  ck->add_option("--precision-cap", ck_cap, "largest working precision in bits");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*seq) return run_seq(seq_kind, seq_n);
    if (*ev) return run_eval(ev_text, ev_bits);
    if (*cfc) return run_cfrac(cf_text, cf_terms, cf_json);
    if (*bd) return run_bound(bd_lambda, bd_chain, bd_json);
    if (*rd) return run_reduce(rd_theorem, rd_grid, rd_json, threads);
    if (*sr) return run_search(sr_eq, sr_m, sr_k, sr_json);
    if (*ce) return run_certify(ce_theorem, ce_out, ce_cap, threads);
    if (*ck) return run_check(ck_path, ck_cap);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
