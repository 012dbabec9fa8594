#include "concat/reduction.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "concat/bigseq.hpp"

namespace concat {

namespace {

std::string substitute(std::string s, const std::string& key, const std::string& value) {
  for (std::size_t pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + value.size())) {
    s.replace(pos, key.size(), value);
  }
  return s;
}

BigNat ceil_of(const Rational& r) {
  BigNat c;
  mpz_cdiv_q(c.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return c;
}

}  // namespace

BigNat reduction_w_bound(const Expr& A, const Expr& B, const BigNat& q, const Rational& epsilon_lower,
                         std::string* decimal) {
  if (epsilon_lower <= 0) throw std::invalid_argument("reduction_w_bound: epsilon must be positive");
  const Expr w = log(A * Expr(q) / Expr(epsilon_lower)) / log(B);
  const Interval iv = eval(w, 256);
  if (decimal) *decimal = iv.upper_decimal(8);
  BigNat c = ceil_of(iv.upper_rational());
  return c < 0 ? BigNat(0) : c;
}

ReductionOutcome reduce(const ReductionProblem& p, const ContinuedFraction& cf, std::optional<std::size_t> q_index,
                        long max_bits) {
  if (p.M < 1) throw std::invalid_argument("reduce: M must be >= 1");
  if (compare(p.A, Expr(0L), max_bits) != Ordering::Greater) throw std::invalid_argument("reduce: A must be > 0");
  if (compare(p.B, Expr(1L), max_bits) != Ordering::Greater) throw std::invalid_argument("reduce: B must be > 1");
  const BigNat six_m = 6 * p.M;
  std::size_t idx = 0;
  BigNat q;
  if (q_index) {
    idx = *q_index;
    if (idx > cf.size()) {
      auto longer = cached_expansion(cf.target(), idx + 8, max_bits);
      q = longer->q(idx);
    } else {
      q = cf.q(idx);
    }
    if (q <= six_m) throw std::invalid_argument("reduce: q_" + std::to_string(idx) + " does not exceed 6M");
  } else {
    auto first = first_denominator_exceeding(cf, six_m);
    idx = first.index;
    q = first.q;
  }
  const Expr qe(q);
  const Expr mu_q = p.mu * qe;
  const Expr tau_q = p.tau * qe;
  // M ||tau q|| scales the width of tau q by M
  const long start = std::max<long>(kLadderStartBits, static_cast<long>(bit_length(q) + bit_length(p.M)) + 96);
  return precision_ladder<ReductionOutcome>(
      [&](long bits) -> std::optional<ReductionOutcome> {
        const Interval d_mu = distance_to_nearest_integer(eval(mu_q, bits));
        const Interval d_tau = distance_to_nearest_integer(eval(tau_q, bits));
        const Interval eps = d_mu - Interval::exact(p.M, bits) * d_tau;
        if (eps.positive()) {
          // refine until the published 20 digits are all certified
          if (bits < max_bits && eps.width_rational() * BigNat("1000000000000000000000") > eps.lower_rational()) {
            return std::nullopt;
          }
          Reduced r;
          r.q_index = idx;
          r.q = q;
          r.epsilon_lower = round_down_significant(eps.lower_rational(), 20);
          r.w_bound = reduction_w_bound(p.A, p.B, q, r.epsilon_lower, &r.w_decimal);
          return ReductionOutcome{r};
        }
        // eps <= 0 certified: the upper end is non-positive and ||tau q|| is separated from 0
        if (mpfr_sgn(eps.upper()) <= 0 && d_tau.positive()) return ReductionOutcome{EpsilonNonpositive{idx, q}};
        return std::nullopt;
      },
      max_bits, "reduce(" + p.label + "): epsilon sign undecided", start);
}

ReductionOutcome exclude_by_congruence(std::uint64_t shift, std::uint64_t modulus) {
  if (!residue_class_excludes(shift, modulus)) {
    throw NotExcludable("F_t = F_{t+" + std::to_string(shift) + "} (mod " + std::to_string(modulus) + ") has a solution");
  }
  return Excluded{"F_t != F_{t+" + std::to_string(shift) + "} mod " + std::to_string(modulus) + " over full period " +
                  std::to_string(pisano_period(modulus))};
}

ReductionOutcome reduce_with_fallback(const ReductionProblem& p, const ContinuedFraction& cf, std::size_t q_index,
                                      std::optional<std::uint64_t> shift, int retries, long max_bits) {
  ReductionOutcome last = reduce(p, cf, q_index, max_bits);
  for (int r = 1; r <= retries && std::holds_alternative<EpsilonNonpositive>(last); ++r) {
    last = reduce(p, cf, q_index + static_cast<std::size_t>(r), max_bits);
  }
  if (std::holds_alternative<EpsilonNonpositive>(last) && shift) {
    try {
      return exclude_by_congruence(*shift);
    } catch (const NotExcludable&) {
    }
  }
  return last;
}

std::vector<GridPoint> triangular_grid(long m0, long m1, long s0, long s_end_offset) {
  std::vector<GridPoint> g;
  for (long m = m0; m <= m1; ++m) {
    for (long s = s0; s < m + s_end_offset; ++s) g.push_back({m, s});
  }
  return g;
}

std::vector<GridPoint> rectangular_grid(long m0, long m1, long s0, long s1) {
  std::vector<GridPoint> g;
  for (long m = m0; m <= m1; ++m) {
    for (long s = s0; s <= s1; ++s) g.push_back({m, s});
  }
  return g;
}

Expr mu_from_template(const std::string& tmpl, long m, long s) {
  return parse_expr(substitute(substitute(tmpl, "{m}", std::to_string(m)), "{s}", std::to_string(s)));
}

std::string outcome_status(const ReductionOutcome& o) {
  if (std::holds_alternative<Reduced>(o)) return "reduced";
  if (std::holds_alternative<EpsilonNonpositive>(o)) return "epsilon_nonpositive";
  return "excluded";
}

SweepResult sweep(const std::function<Expr(long m, long s)>& mu_family, const std::vector<GridPoint>& grid,
                  const ReductionProblem& shared, const ContinuedFraction& cf, std::size_t q_index,
                  const SweepOptions& opts) {
  SweepResult out;
  out.rows.resize(grid.size(), SweepRow{{0, 0}, Excluded{""}, false});
  if (grid.empty()) return out;
  // warm the tables and the expansion before going parallel
  long max_m = 0;
  for (const auto& g : grid) max_m = std::max(max_m, g.m);
  (void)fib(static_cast<SeqIndex>(max_m + 2));
  (void)lucas(static_cast<SeqIndex>(max_m + 2));
  auto longer = cached_expansion(cf.target(), std::max(cf.size(), q_index + static_cast<std::size_t>(opts.retries) + 2));

  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(grid.size());
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      const GridPoint g = grid[i];
      ReductionProblem p = shared;
      p.mu = mu_family(g.m, g.s);
      p.label = shared.label + " m=" + std::to_string(g.m) + " s=" + std::to_string(g.s);
      SweepRow row{g, Excluded{""}, false};
      try {
        ReductionOutcome first = reduce(p, *longer, q_index, opts.max_bits);
        row.failed_at_primary = std::holds_alternative<EpsilonNonpositive>(first);
        ReductionOutcome r = first;
        // planned shifts are closed by congruence for every m
        const bool planned = g.s > 0 && std::find(opts.congruence_first.begin(), opts.congruence_first.end(), g.s) !=
                                            opts.congruence_first.end();
        bool done = !row.failed_at_primary;
        if (planned) {
          try {
            r = exclude_by_congruence(static_cast<std::uint64_t>(g.s));
            done = true;
          } catch (const NotExcludable&) {
          }
        }
        if (!done) {
          for (int k = 1; k <= opts.retries && std::holds_alternative<EpsilonNonpositive>(r); ++k) {
            r = reduce(p, *longer, q_index + static_cast<std::size_t>(k), opts.max_bits);
          }
          if (std::holds_alternative<EpsilonNonpositive>(r) && opts.congruence_fallback && g.s > 0) {
            try {
              r = exclude_by_congruence(static_cast<std::uint64_t>(g.s));
            } catch (const NotExcludable&) {
            }
          }
        }
        row.outcome = r;
      } catch (const PrecisionExhausted& e) {
        errors[i] = p.label + ": " + e.what();
        row.outcome = EpsilonNonpositive{q_index, longer->q(q_index)};
        row.failed_at_primary = true;
      }
      out.rows[i] = std::move(row);
    }
  };
  unsigned n = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(grid.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const SweepRow& row = out.rows[i];
    if (!errors[i].empty()) out.unresolved.push_back(errors[i]);
    if (row.failed_at_primary) out.failures.push_back(row.point);
    if (const auto* r = std::get_if<Reduced>(&row.outcome)) {
      if (!row.failed_at_primary && (!out.minimum || r->epsilon_lower < out.minimum->epsilon_lower)) {
        out.minimum = SweepMinimum{r->epsilon_lower, row.point};
      }
      if (!out.w_bound || r->w_bound > *out.w_bound) out.w_bound = r->w_bound;
    } else if (std::holds_alternative<EpsilonNonpositive>(row.outcome) && errors[i].empty()) {
      out.unresolved.push_back(shared.label + " m=" + std::to_string(row.point.m) + " s=" + std::to_string(row.point.s) +
                               ": epsilon <= 0 after retries");
    }
  }
  return out;
}

}  // namespace concat
