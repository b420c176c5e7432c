#pragma once

// Fibonacci numbers in the convention F_1 = 1, F_2 = 2, F_{k+1} = F_{k-1} + F_k,
// so that F_{k+1} counts the golden words (no factor 11) of length k.

#include <cmath>
#include <cstdint>
#include <gmpxx.h>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "word.hpp"

namespace mgs {

class FibonacciTable {
public:
  FibonacciTable() : values_{mpz_class(0), mpz_class(1), mpz_class(2)} {}

  // F_k, k >= 1. Grows the table on demand.
  mpz_class operator()(unsigned k) {
    if (k == 0) throw std::domain_error("FibonacciTable: index starts at 1");
    while (values_.size() <= k) values_.push_back(values_[values_.size() - 2] + values_.back());
    return values_[k];
  }

  std::size_t stored() const noexcept { return values_.size() - 1; }

private:
  // values_[0] is a placeholder so that values_[k] = F_k.
  std::vector<mpz_class> values_;
};

// Shared, lock-protected table for the free functions below.
inline mpz_class fibonacci(unsigned k) {
  static FibonacciTable table;
  static std::mutex guard;
  std::lock_guard lock(guard);
  return table(k);
}

inline double log2_of(const mpz_class& z) {
  if (z <= 0) throw std::domain_error("log2_of: argument must be positive");
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  return std::log2(mantissa) + static_cast<double>(exponent);
}

inline mpz_class count_golden_words(unsigned k) {
  if (k == 0) throw std::domain_error("count_golden_words: k must be positive");
  return fibonacci(k + 1);
}

struct CylinderCount {
  mpz_class exact;
  double log2 = 0.0;
};

// Number of words of length n with u_k u_{2k} = 0 for all k: one golden word per chain.
inline CylinderCount count_cylinders(std::uint64_t n) {
  if (n == 0) throw std::domain_error("count_cylinders: n must be positive");
  const auto counts = chain_length_counts(n);
  CylinderCount result{mpz_class(1), 0.0};
  for (unsigned k = 1; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    const mpz_class f = fibonacci(k + 1);
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), f.get_mpz_t(), counts[k]);
    result.exact *= power;
    result.log2 += static_cast<double>(counts[k]) * log2_of(f);
  }
  return result;
}

// log2 of count_cylinders(n) without forming the integer.
inline double count_cylinders_log2(std::uint64_t n) {
  if (n == 0) throw std::domain_error("count_cylinders_log2: n must be positive");
  const auto counts = chain_length_counts(n);
  double total = 0.0;
  for (unsigned k = 1; k < counts.size(); ++k)
    if (counts[k] != 0) total += static_cast<double>(counts[k]) * log2_of(fibonacci(k + 1));
  return total;
}

}  // namespace mgs
