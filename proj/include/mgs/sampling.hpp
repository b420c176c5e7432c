#pragma once

// Forward simulation of mu(r) chains and of P_delta-typical prefixes.
//
// Chain J(i) of the point with seed S reads uniforms from the substream
// (S, i); symbol number j of the chain always consumes draw j. Longer prefixes
// therefore extend shorter ones, and the word does not depend on the order in
// which chains are generated.

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "measures.hpp"
#include "random.hpp"
#include "word.hpp"

namespace mgs {

namespace detail {

// Symbol j (0-based) of a chain given the previous symbol.
inline bool next_chain_symbol(bool previous, double r, const RandomStream& stream, std::uint64_t j) {
  if (previous) return false;
  return stream.uniform_at(j) < 1.0 - r;
}

inline std::uint64_t low_mask(unsigned k) { return k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1; }

}  // namespace detail

inline BinaryWord sample_chain(const MarkovParams& params, unsigned k, const RandomStream& stream) {
  if (k == 0) throw std::invalid_argument("sample_chain: k must be positive");
  BinaryWord w;
  bool previous = false;
  for (unsigned j = 0; j < k; ++j) {
    previous = detail::next_chain_symbol(previous, params.r, stream, j);
    w.push_back(previous);
  }
  return w;
}

// All chains of one sampled point up to length n, bit-packed per chain:
// bit j of bits(i) is the symbol at position 2^j i.
class ChainSample {
public:
  ChainSample(const BlockAssignment& assign, std::uint64_t n, std::uint64_t seed)
      : n_(n), seed_(seed), assign_(assign), chains_((n + 1) / 2, 0) {
    if (n == 0) throw std::invalid_argument("ChainSample: n must be positive");
    const RandomStream root(seed);
    const unsigned blocks = static_cast<unsigned>(std::bit_width(n));
    params_.resize(blocks);
    log0_.resize(blocks);
    log1_.resize(blocks);
    for (unsigned b = 0; b < blocks; ++b) {
      params_[b] = assign.parameter(b);
      log0_[b] = std::log2(params_[b]);
      log1_[b] = std::log2(1.0 - params_[b]);
    }
    for (std::uint64_t i = 1; i <= n; i += 2) {
      const RandomStream stream = root.substream(i);
      const unsigned k = static_cast<unsigned>(std::bit_width(n / i));
      const double r = params_[std::bit_width(i) - 1];
      std::uint64_t bits = 0;
      bool previous = false;
      for (unsigned j = 0; j < k; ++j) {
        previous = detail::next_chain_symbol(previous, r, stream, j);
        if (previous) bits |= std::uint64_t{1} << j;
      }
      chains_[i / 2] = bits;
    }
  }

  std::uint64_t length() const noexcept { return n_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const BlockAssignment& assignment() const noexcept { return assign_; }
  std::uint64_t chain_bits(std::uint64_t i) const { return chains_.at(i / 2); }

  bool symbol(std::uint64_t position) const {
    if (position == 0 || position > n_) throw std::out_of_range("ChainSample: position out of range");
    const unsigned r = static_cast<unsigned>(std::countr_zero(position));
    return (chains_[(position >> r) / 2] >> r) & 1u;
  }

  BinaryWord word(std::uint64_t m) const {
    check_prefix(m);
    BinaryWord w = BinaryWord::zeros(m);
    for_each_chain(m, [&](std::uint64_t i, unsigned k) {
      std::uint64_t bits = chains_[i / 2] & detail::low_mask(k);
      while (bits != 0) {
        const unsigned j = static_cast<unsigned>(std::countr_zero(bits));
        w.set(i << j, true);
        bits &= bits - 1;
      }
    });
    return w;
  }
  BinaryWord word() const { return word(n_); }

  // N_0(x_1^m).
  std::uint64_t zeros(std::uint64_t m) const {
    check_prefix(m);
    std::uint64_t ones = 0;
    for_each_chain(m, [&](std::uint64_t i, unsigned k) {
      ones += static_cast<std::uint64_t>(std::popcount(chains_[i / 2] & detail::low_mask(k)));
    });
    return m - ones;
  }

  // log2 P[x_1^m] under the assignment the point was drawn from. Exponent
  // counts are accumulated per block in integers and combined once.
  double log2_prob(std::uint64_t m) const {
    check_prefix(m);
    std::vector<std::int64_t> ones(log0_.size(), 0), zero_weight(log0_.size(), 0);
    for_each_chain(m, [&](std::uint64_t i, unsigned k) {
      const std::uint64_t bits = chains_[i / 2];
      const int n1 = std::popcount(bits & detail::low_mask(k));
      const int n1_before_last = std::popcount(bits & detail::low_mask(k - 1));
      const unsigned b = static_cast<unsigned>(std::bit_width(i)) - 1;
      ones[b] += n1;
      zero_weight[b] += static_cast<int>(k) - n1 - n1_before_last;
    });
    double total = 0.0;
    for (std::size_t b = 0; b < ones.size(); ++b) {
      if (ones[b] != 0) total += static_cast<double>(ones[b]) * log1_[b];
      if (zero_weight[b] != 0) total += static_cast<double>(zero_weight[b]) * log0_[b];
    }
    return total;
  }

private:
  void check_prefix(std::uint64_t m) const {
    if (m > n_) throw std::out_of_range("ChainSample: prefix longer than sample");
  }

  // Visits odd i <= m with k = chain_length(m, i), grouped by k to avoid divisions.
  template <class F>
  void for_each_chain(std::uint64_t m, F&& f) const {
    for (unsigned k = 1; (m >> (k - 1)) != 0; ++k) {
      const std::uint64_t hi = m >> (k - 1), lo = m >> k;  // i in (lo, hi]
      for (std::uint64_t i = lo + 1 + (lo % 2 == 0 ? 0 : 1); i <= hi; i += 2) f(i, k);
    }
  }

  std::uint64_t n_;
  std::uint64_t seed_;
  BlockAssignment assign_;
  std::vector<std::uint64_t> chains_;
  std::vector<double> params_, log0_, log1_;
};

struct SampledPoint {
  BinaryWord word;
  std::uint64_t seed;
  std::string measure;
};

inline SampledPoint sample_point(const BlockAssignment& assign, std::uint64_t n, std::uint64_t seed) {
  const ChainSample chains(assign, n, seed);
  return {chains.word(), seed, assign.describe()};
}

}  // namespace mgs
