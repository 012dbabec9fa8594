#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "concat/bignat.hpp"
#include "concat/bigseq.hpp"

namespace concat {

enum class Equation {
  FibLucas = 1,  // F_n = 10^d F_m + L_k, d = digits of L_k
  LucasFib = 2,  // F_n = 10^d L_m + F_k, d = digits of F_k
};

std::string equation_text(Equation eq);

enum class IndexWindow {
  Corrected,  // m+k-2 < n < m+k+8 for both equations
  Printed,    // as printed: m+k-1 < n < m+k+7 for the second equation
  Unbounded,  // membership by is_fibonacci; used to check the windows
};

struct SolutionRecord {
  Equation equation;
  SeqIndex n, m, k;
  std::uint64_t d;
  BigNat value;
  bool degenerate;  // Eq. 1 with m = 0: the left part is absent
  bool operator==(const SolutionRecord&) const = default;
};

// Inclusive n range scanned for (m, k).
struct NRange {
  SeqIndex lo, hi;
};
NRange index_window(Equation eq, SeqIndex m, SeqIndex k, IndexWindow w = IndexWindow::Corrected);

// All solutions with 0 <= m <= m_max, k_min(eq) <= k <= k_max, ordered by (m, k, n).
// k starts at 0 for Eq. 1 and at 1 for Eq. 2.
std::vector<SolutionRecord> search_range(Equation eq, SeqIndex m_max, SeqIndex k_max,
                                         IndexWindow w = IndexWindow::Corrected, unsigned threads = 0);

// Every n with F_n = v (both 1 and 2 for v = 1); empty when v is not a Fibonacci number.
std::vector<SeqIndex> is_fibonacci(const BigNat& v);

// Residual box after reduction: k < k_bound, m <= m_bound, n - k < shift_bound.
std::vector<SolutionRecord> close_gap(Equation eq, SeqIndex k_bound, SeqIndex m_bound, SeqIndex shift_bound,
                                      unsigned threads = 0);

// Decimal string of F_n equals the left rendering followed by the right rendering.
bool concatenation_holds(const SolutionRecord& r);

std::vector<BigNat> value_set(const std::vector<SolutionRecord>& records);

}  // namespace concat
