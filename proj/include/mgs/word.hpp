#pragma once

// Finite binary words and the chain decomposition of index sets.
//
// Positions are 1-based throughout: a word u of length n holds u_1 ... u_n.
// For odd i the chain J(i) = {i, 2i, 4i, ...} picks out a subsequence, and the
// chains for all odd i partition the positive integers.

#include <bit>
#include <compare>
#include <cstdint>
#include <gmpxx.h>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mgs {

class BinaryWord {
public:
  BinaryWord() = default;

  explicit BinaryWord(std::string_view symbols) {
    blocks_.reserve((symbols.size() + 63) / 64);
    for (char c : symbols) {
      if (c != '0' && c != '1')
        throw std::invalid_argument("BinaryWord: symbol '" + std::string(1, c) +
                                    "' is not 0 or 1");
      push_back(c == '1');
    }
  }

  static BinaryWord zeros(std::size_t n) {
    BinaryWord w;
    w.size_ = n;
    w.blocks_.assign((n + 63) / 64, 0);
    return w;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  // u_k, 1 <= k <= size().
  bool operator[](std::size_t k) const noexcept {
    const std::size_t b = k - 1;
    return (blocks_[b >> 6] >> (b & 63)) & 1u;
  }

  bool at(std::size_t k) const {
    if (k == 0 || k > size_)
      throw std::out_of_range("BinaryWord: position " + std::to_string(k) +
                              " outside 1.." + std::to_string(size_));
    return (*this)[k];
  }

  void set(std::size_t k, bool bit) {
    if (k == 0 || k > size_)
      throw std::out_of_range("BinaryWord: position out of range");
    const std::size_t b = k - 1;
    const std::uint64_t mask = std::uint64_t{1} << (b & 63);
    if (bit)
      blocks_[b >> 6] |= mask;
    else
      blocks_[b >> 6] &= ~mask;
  }

  void push_back(bool bit) {
    if ((size_ & 63) == 0) blocks_.push_back(0);
    ++size_;
    if (bit) blocks_[(size_ - 1) >> 6] |= std::uint64_t{1} << ((size_ - 1) & 63);
  }

  // N_1(u_1 ... u_m).
  std::size_t count_ones(std::size_t m) const noexcept {
    if (m > size_) m = size_;
    std::size_t total = 0;
    const std::size_t full = m >> 6;
    for (std::size_t b = 0; b < full; ++b) total += std::popcount(blocks_[b]);
    if (const std::size_t rest = m & 63; rest != 0)
      total += std::popcount(blocks_[full] & ((std::uint64_t{1} << rest) - 1));
    return total;
  }
  std::size_t count_ones() const noexcept { return count_ones(size_); }

  // N_0(u_1 ... u_m).
  std::size_t count_zeros(std::size_t m) const noexcept {
    if (m > size_) m = size_;
    return m - count_ones(m);
  }
  std::size_t count_zeros() const noexcept { return count_zeros(size_); }

  BinaryWord prefix(std::size_t m) const {
    if (m > size_) throw std::out_of_range("BinaryWord::prefix longer than word");
    BinaryWord w = *this;
    w.size_ = m;
    w.blocks_.resize((m + 63) / 64);
    if (const std::size_t rest = m & 63; rest != 0)
      w.blocks_.back() &= (std::uint64_t{1} << rest) - 1;
    return w;
  }

  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t k = 1; k <= size_; ++k)
      if ((*this)[k]) s[k - 1] = '1';
    return s;
  }

  friend bool operator==(const BinaryWord&, const BinaryWord&) = default;

private:
  std::vector<std::uint64_t> blocks_;
  std::size_t size_ = 0;
};

// Start of a chain J(i); always odd and positive.
class ChainIndex {
public:
  explicit ChainIndex(std::uint64_t i) : value_(i) {
    if (i == 0 || (i & 1u) == 0)
      throw std::invalid_argument("ChainIndex: " + std::to_string(i) + " is not an odd positive integer");
  }

  std::uint64_t value() const noexcept { return value_; }

  // b(i) = floor(log2 i), so 2^b <= i < 2^(b+1).
  unsigned block() const noexcept { return static_cast<unsigned>(std::bit_width(value_)) - 1; }

  friend auto operator<=>(const ChainIndex&, const ChainIndex&) = default;

private:
  std::uint64_t value_;
};

// Number of elements of J(i) inside {1..n}: the unique k with 2^(k-1) i <= n < 2^k i.
inline unsigned chain_length(std::uint64_t n, ChainIndex i) {
  if (i.value() > n)
    throw std::domain_error("chain_length: chain start " + std::to_string(i.value()) +
                            " exceeds prefix length " + std::to_string(n));
  return static_cast<unsigned>(std::bit_width(n / i.value()));
}

inline bool is_golden_word(const BinaryWord& u) {
  for (std::size_t k = 1; k < u.size(); ++k)
    if (u[k] && u[k + 1]) return false;
  return true;
}

inline bool is_multiplicative_prefix(const BinaryWord& u) {
  for (std::size_t k = 1; 2 * k <= u.size(); ++k)
    if (u[k] && u[2 * k]) return false;
  return true;
}

inline BinaryWord restrict_to_chain(const BinaryWord& u, ChainIndex i) {
  if (i.value() > u.size())
    throw std::out_of_range("restrict_to_chain: chain J(" + std::to_string(i.value()) +
                            ") does not meet a prefix of length " + std::to_string(u.size()));
  BinaryWord out;
  for (std::uint64_t pos = i.value(); pos <= u.size(); pos <<= 1) out.push_back(u[pos]);
  return out;
}

// Inverse of restrict_to_chain over all chains: places chains[j] on J(2j+1).
inline BinaryWord interleave_chains(const std::vector<BinaryWord>& chains, std::size_t n) {
  if (chains.size() != (n + 1) / 2)
    throw std::invalid_argument("interleave_chains: need one chain per odd index <= n");
  BinaryWord u = BinaryWord::zeros(n);
  for (std::size_t j = 0; j < chains.size(); ++j) {
    const std::uint64_t i = 2 * j + 1;
    const auto& c = chains[j];
    if (c.size() != chain_length(n, ChainIndex(i)))
      throw std::invalid_argument("interleave_chains: chain length mismatch");
    std::uint64_t pos = i;
    for (std::size_t r = 1; r <= c.size(); ++r, pos <<= 1) u.set(pos, c[r]);
  }
  return u;
}

// Number of odd integers in [1, x].
inline std::uint64_t odd_count_upto(std::uint64_t x) noexcept { return (x + 1) / 2; }

inline std::uint64_t count_odd_in(const mpq_class& a, const mpq_class& b) {
  if (!(a >= 0 && a < b)) throw std::domain_error("count_odd_in: need 0 <= a < b");
  const mpz_class fa = mpz_class(a.get_num() / a.get_den());  // floor for a >= 0
  const mpz_class fb = mpz_class(b.get_num() / b.get_den());
  return odd_count_upto(fb.get_ui()) - odd_count_upto(fa.get_ui());
}

// Odd integers i with a < i <= b, ascending.
inline std::vector<ChainIndex> odd_indices_in(const mpq_class& a, const mpq_class& b) {
  if (!(a >= 0 && a < b)) throw std::domain_error("odd_indices_in: need 0 <= a < b");
  const std::uint64_t lo = mpz_class(a.get_num() / a.get_den()).get_ui() + 1;
  const std::uint64_t hi = mpz_class(b.get_num() / b.get_den()).get_ui();
  std::vector<ChainIndex> out;
  for (std::uint64_t i = lo | 1u; i <= hi; i += 2) out.emplace_back(i);
  return out;
}

inline std::map<ChainIndex, unsigned> chain_partition(std::uint64_t n) {
  if (n == 0) throw std::domain_error("chain_partition: n must be positive");
  std::map<ChainIndex, unsigned> out;
  for (std::uint64_t i = 1; i <= n; i += 2) out.emplace(ChainIndex(i), chain_length(n, ChainIndex(i)));
  return out;
}

// A_k for k = 1..K: the number of odd i <= n whose chain has length k inside {1..n},
// i.e. the odd i in (n/2^k, n/2^(k-1)]. Index 0 is unused.
inline std::vector<std::uint64_t> chain_length_counts(std::uint64_t n) {
  if (n == 0) throw std::domain_error("chain_length_counts: n must be positive");
  const unsigned longest = static_cast<unsigned>(std::bit_width(n));
  std::vector<std::uint64_t> counts(longest + 1, 0);
  for (unsigned k = 1; k <= longest; ++k)
    counts[k] = odd_count_upto(n >> (k - 1)) - odd_count_upto(n >> k);
  return counts;
}

}  // namespace mgs
