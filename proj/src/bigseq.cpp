#include "concat/bigseq.hpp"

#include <stdexcept>

namespace concat {

SequenceTable::SequenceTable(BigNat seed0, BigNat seed1)
    : table_(std::make_shared<const Table>(Table{std::move(seed0), std::move(seed1)})) {}

void SequenceTable::extend_to(SeqIndex n) const {
  // caller holds mutex_
  if (n < table_->size()) return;
  auto next = std::make_shared<Table>(*table_);
  std::size_t target = std::max<std::size_t>(n + 1, next->size() * 2);
  next->reserve(target);
  while (next->size() < target) {
    const std::size_t s = next->size();
    next->push_back((*next)[s - 1] + (*next)[s - 2]);
  }
  table_ = std::move(next);
}

std::shared_ptr<const SequenceTable::Table> SequenceTable::snapshot(SeqIndex n) const {
  std::lock_guard lock(mutex_);
  extend_to(n);
  return table_;
}

BigNat SequenceTable::at(SeqIndex n) const { return (*snapshot(n))[n]; }

const SequenceTable& fibonacci_table() {
  static const SequenceTable table(0, 1);
  return table;
}

const SequenceTable& lucas_table() {
  static const SequenceTable table(2, 1);
  return table;
}

BigNat fib(SeqIndex n) { return fibonacci_table().at(n); }
BigNat lucas(SeqIndex k) { return lucas_table().at(k); }

BigNat term(Sequence kind, SeqIndex n) { return kind == Sequence::Fibonacci ? fib(n) : lucas(n); }

std::uint64_t digit_count(const BigNat& v) {
  if (v <= 0) throw std::domain_error("digit_count: value must be >= 1");
  // mpz_sizeinbase may overshoot by one
  std::uint64_t d = mpz_sizeinbase(v.get_mpz_t(), 10);
  if (d > 1 && v < pow10(d - 1)) --d;
  return d;
}

DigitBounds digit_bounds_lucas(SeqIndex k) {
  const auto kk = static_cast<long>(k);
  DigitBounds b{Rational(kk - 1, 5), Rational(kk + 6, 4)};
  b.lo.canonicalize();
  b.hi.canonicalize();
  return b;
}

DigitBounds digit_bounds_fib(SeqIndex k) {
  if (k < 1) throw std::invalid_argument("digit_bounds_fib: k must be >= 1");
  const auto kk = static_cast<long>(k);
  DigitBounds b{Rational(kk - 2, 5), Rational(kk + 3, 4)};
  b.lo.canonicalize();
  b.hi.canonicalize();
  return b;
}

std::uint64_t pisano_period(std::uint64_t modulus) {
  if (modulus < 2) throw std::invalid_argument("pisano_period: modulus must be >= 2");
  // the period never exceeds 6·modulus
  std::uint64_t prev = 0, cur = 1;
  for (std::uint64_t i = 1; i <= 6 * modulus; ++i) {
    const std::uint64_t next = (prev + cur) % modulus;
    prev = cur;
    cur = next;
    if (prev == 0 && cur == 1) return i;
  }
  throw std::logic_error("pisano_period: no period found");
}

bool residue_class_excludes(std::uint64_t shift, std::uint64_t modulus) {
  if (shift < 1) throw std::invalid_argument("residue_class_excludes: shift must be >= 1");
  const std::uint64_t period = pisano_period(modulus);
  std::vector<std::uint64_t> residues(period + shift % period + 1);
  residues[0] = 0;
  if (residues.size() > 1) residues[1] = 1 % modulus;
  for (std::size_t i = 2; i < residues.size(); ++i) residues[i] = (residues[i - 1] + residues[i - 2]) % modulus;
  for (std::uint64_t t = 0; t < period; ++t) {
    if (residues[t] == residues[t + shift % period]) return false;
  }
  return true;
}

}  // namespace concat
