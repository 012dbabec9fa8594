#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "concat/bignat.hpp"

namespace concat {

using SeqIndex = std::uint64_t;

enum class Sequence { Fibonacci, Lucas };

struct SeqValue {
  Sequence kind;
  SeqIndex index;
  BigNat value;
};

// Memoized exact Fibonacci and Lucas values, extended by iteration.
// Readers take an immutable snapshot; extension swaps in a longer table.
class SequenceTable {
 public:
  using Table = std::vector<BigNat>;

  SequenceTable(BigNat seed0, BigNat seed1);

  BigNat at(SeqIndex n) const;

  // Snapshot covering at least indices [0, n]. The returned table never changes.
  std::shared_ptr<const Table> snapshot(SeqIndex n) const;

 private:
  void extend_to(SeqIndex n) const;

  mutable std::mutex mutex_;
  mutable std::shared_ptr<const Table> table_;
};

const SequenceTable& fibonacci_table();
const SequenceTable& lucas_table();

BigNat fib(SeqIndex n);
BigNat lucas(SeqIndex k);
BigNat term(Sequence kind, SeqIndex n);

// Number of base-10 digits; throws std::domain_error for 0.
std::uint64_t digit_count(const BigNat& v);

// Open interval (lo, hi) guaranteed to contain the digit count.
struct DigitBounds {
  Rational lo;
  Rational hi;
  bool strictly_contains(std::uint64_t d) const { return lo < d && Rational(d) < hi; }
};

// ((k-1)/5, (k+6)/4) for digit_count(lucas(k)).
DigitBounds digit_bounds_lucas(SeqIndex k);
// ((k-2)/5, (k+3)/4) for digit_count(fib(k)), k >= 1. The upper end is attained at k = 1.
DigitBounds digit_bounds_fib(SeqIndex k);

// Period of the Fibonacci sequence modulo `modulus` (>= 2).
std::uint64_t pisano_period(std::uint64_t modulus);

// True iff no t in a full period has F_t == F_{t+shift} (mod modulus).
bool residue_class_excludes(std::uint64_t shift, std::uint64_t modulus);

}  // namespace concat
