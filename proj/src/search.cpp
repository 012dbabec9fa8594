#include "concat/search.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

namespace concat {

std::string equation_text(Equation eq) {
  return eq == Equation::FibLucas ? "F_n = 10^d F_m + L_k" : "F_n = 10^d L_m + F_k";
}

NRange index_window(Equation eq, SeqIndex m, SeqIndex k, IndexWindow w) {
  const SeqIndex s = m + k;
  if (w == IndexWindow::Printed && eq == Equation::LucasFib) return {s, s + 6};
  return {s == 0 ? 0 : s - 1, s + 7};
}

std::vector<SeqIndex> is_fibonacci(const BigNat& v) {
  if (v < 0) return {};
  if (v == 0) return {0};
  if (v == 1) return {1, 2};
  // F_n >= alpha^(n-2) and log2 alpha > 0.69
  const SeqIndex cap = static_cast<SeqIndex>(bit_length(v)) * 3 / 2 + 4;
  auto table = fibonacci_table().snapshot(cap);
  auto begin = table->begin() + 2;
  auto end = table->begin() + static_cast<std::ptrdiff_t>(cap + 1);
  auto it = std::lower_bound(begin, end, v);
  if (it != end && *it == v) return {static_cast<SeqIndex>(it - table->begin())};
  return {};
}

namespace {

std::vector<SolutionRecord> scan_box(Equation eq, SeqIndex m_max, SeqIndex k_min, SeqIndex k_max, IndexWindow w,
                                     SeqIndex shift_bound, unsigned threads) {
  if (k_min > k_max) return {};
  const SeqIndex top = m_max + k_max + 8;
  auto fibs = fibonacci_table().snapshot(top);
  auto lucs = lucas_table().snapshot(top);
  const auto& F = *fibs;
  const auto& L = *lucs;
  const auto& left_seq = eq == Equation::FibLucas ? F : L;
  const auto& right_seq = eq == Equation::FibLucas ? L : F;

  std::vector<BigNat> tens{1};
  std::vector<std::vector<SolutionRecord>> stripes(m_max + 1);
  std::vector<std::uint64_t> digits(k_max + 1, 0);
  for (SeqIndex k = k_min; k <= k_max; ++k) {
    digits[k] = digit_count(right_seq[k]);
    while (tens.size() <= digits[k]) tens.push_back(tens.back() * 10);
  }

  std::atomic<SeqIndex> next{0};
  auto worker = [&] {
    for (;;) {
      const SeqIndex m = next.fetch_add(1);
      if (m > m_max) return;
      auto& out = stripes[m];
      const bool degenerate = eq == Equation::FibLucas && m == 0;
      for (SeqIndex k = k_min; k <= k_max; ++k) {
        const std::uint64_t d = digits[k];
        const BigNat value = degenerate ? right_seq[k] : tens[d] * left_seq[m] + right_seq[k];
        auto record = [&](SeqIndex n) {
          out.push_back(SolutionRecord{eq, n, m, k, d, value, degenerate});
        };
        if (w == IndexWindow::Unbounded) {
          for (SeqIndex n : is_fibonacci(value)) {
            if (n >= k + shift_bound) continue;
            record(n);
          }
          continue;
        }
        const NRange r = index_window(eq, m, k, w);
        for (SeqIndex n = r.lo; n <= r.hi && n < k + shift_bound; ++n) {
          if (F[n] == value) record(n);
        }
      }
    }
  };
  unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<SeqIndex>(n, m_max + 1));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<SolutionRecord> all;
  for (auto& s : stripes) all.insert(all.end(), s.begin(), s.end());
  return all;
}

SeqIndex first_k(Equation eq) { return eq == Equation::LucasFib ? 1 : 0; }

}  // namespace

std::vector<SolutionRecord> search_range(Equation eq, SeqIndex m_max, SeqIndex k_max, IndexWindow w,
                                         unsigned threads) {
  return scan_box(eq, m_max, first_k(eq), k_max, w, ~SeqIndex{0} / 2, threads);
}

std::vector<SolutionRecord> close_gap(Equation eq, SeqIndex k_bound, SeqIndex m_bound, SeqIndex shift_bound,
                                      unsigned threads) {
  if (k_bound == 0 || shift_bound == 0) return {};
  return scan_box(eq, m_bound, first_k(eq), k_bound - 1, IndexWindow::Corrected, shift_bound, threads);
}

bool concatenation_holds(const SolutionRecord& r) {
  const bool eq1 = r.equation == Equation::FibLucas;
  const std::string right = to_decimal(eq1 ? lucas(r.k) : fib(r.k));
  const std::string whole = to_decimal(fib(r.n));
  if (whole != to_decimal(r.value)) return false;
  if (r.degenerate) return whole == right;
  const std::string left = to_decimal(eq1 ? fib(r.m) : lucas(r.m));
  return whole == left + right && right.size() == r.d;
}

std::vector<BigNat> value_set(const std::vector<SolutionRecord>& records) {
  std::set<BigNat> s;
  for (const auto& r : records) s.insert(r.value);
  return {s.begin(), s.end()};
}

}  // namespace concat
