#include "doctest.h"

#include "concat/search.hpp"

using namespace concat;

namespace {

std::vector<long> values(const std::vector<SolutionRecord>& recs) {
  std::vector<long> out;
  for (const auto& v : value_set(recs)) out.push_back(v.get_si());
  return out;
}

}  // namespace

TEST_SUITE("search") {
  TEST_CASE("Fibonacci membership") {
    CHECK(is_fibonacci(BigNat(0)) == std::vector<SeqIndex>{0});
    CHECK(is_fibonacci(BigNat(1)) == std::vector<SeqIndex>{1, 2});
    CHECK(is_fibonacci(BigNat(144)) == std::vector<SeqIndex>{12});
    CHECK(is_fibonacci(BigNat(145)).empty());
    CHECK(is_fibonacci(fib(777)) == std::vector<SeqIndex>{777});
    CHECK(is_fibonacci(fib(777) + 1).empty());
    CHECK(is_fibonacci(BigNat(-3)).empty());
  }

  TEST_CASE("first equation") {
    const auto recs = search_range(Equation::FibLucas, 200, 200);
    CHECK(values(recs) == std::vector<long>{1, 2, 3, 13, 21, 34});
    for (const auto& r : recs) CHECK(concatenation_holds(r));
    // 13 = F_7 = 1 || 3
    bool seen = false;
    for (const auto& r : recs) seen |= (r.n == 7 && r.k == 2 && !r.degenerate);
    CHECK(seen);
  }

  TEST_CASE("second equation") {
    const auto recs = search_range(Equation::LucasFib, 200, 200);
    CHECK(values(recs) == std::vector<long>{13, 21});
    for (const auto& r : recs) CHECK(concatenation_holds(r));
  }

  TEST_CASE("index windows") {
    const auto w = index_window(Equation::LucasFib, 3, 4, IndexWindow::Corrected);
    CHECK(w.lo == 6);
    CHECK(w.hi == 14);
    const auto pw = index_window(Equation::LucasFib, 3, 4, IndexWindow::Printed);
    CHECK(pw.lo == 7);
    CHECK(pw.hi == 13);
    // the printed window loses the record 21 = F_8 = L_0 || F_1 (n = m+k+7); F_2 = 1 still finds the value
    const auto printed = search_range(Equation::LucasFib, 60, 60, IndexWindow::Printed);
    const auto corrected = search_range(Equation::LucasFib, 60, 60);
    CHECK(corrected.size() == printed.size() + 1);
    bool lost = false;
    for (const auto& r : printed) lost |= r.m == 0 && r.k == 1;
    CHECK_FALSE(lost);
    bool found = false;
    for (const auto& r : corrected) found |= r.m == 0 && r.k == 1 && r.n == 8;
    CHECK(found);
    const auto open = search_range(Equation::LucasFib, 60, 60, IndexWindow::Unbounded);
    CHECK(values(open) == std::vector<long>{13, 21});
    CHECK(search_range(Equation::FibLucas, 60, 60, IndexWindow::Unbounded) == search_range(Equation::FibLucas, 60, 60));
  }

  TEST_CASE("parallel search is deterministic") {
    const auto one = search_range(Equation::FibLucas, 120, 120, IndexWindow::Corrected, 1);
    const auto many = search_range(Equation::FibLucas, 120, 120, IndexWindow::Corrected, 8);
    CHECK(one == many);
  }

  TEST_CASE("gap closure adds nothing") {
    const auto gap = close_gap(Equation::LucasFib, 117, 168, 176);
    CHECK(values(gap) == std::vector<long>{13, 21});
    const auto gap1 = close_gap(Equation::FibLucas, 85, 150, 158);
    CHECK(values(gap1) == std::vector<long>{1, 2, 3, 13, 21, 34});
    CHECK(close_gap(Equation::FibLucas, 0, 10, 10).empty());
  }
}
