#pragma once

// The Markov measure mu(r) on golden words and the chain-product measures
// P_mu and P_delta on prefixes of the multiplicative golden mean shift.
// All probabilities are carried as base-2 logarithms.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "analytics.hpp"
#include "interval.hpp"
#include "word.hpp"

namespace mgs {

// log2 of a probability. The zero probability is an exact sentinel (-infinity)
// and absorbs under addition, which corresponds to multiplying probabilities.
class LogProb {
public:
  constexpr LogProb() = default;  // probability one
  constexpr explicit LogProb(double log2_value) : value_(log2_value) {}

  static constexpr LogProb zero() { return LogProb(-std::numeric_limits<double>::infinity()); }
  static constexpr LogProb one() { return LogProb(0.0); }

  bool is_zero() const noexcept { return std::isinf(value_) && value_ < 0; }
  double value() const noexcept { return value_; }
  double probability() const noexcept { return is_zero() ? 0.0 : std::exp2(value_); }

  friend LogProb operator+(LogProb a, LogProb b) noexcept {
    if (a.is_zero() || b.is_zero()) return zero();
    return LogProb(a.value_ + b.value_);
  }
  LogProb& operator+=(LogProb b) noexcept { return *this = *this + b; }

  std::string to_string() const {
    if (is_zero()) return "ZERO";
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
  }

private:
  double value_ = 0.0;
};

// mu(r): initial law (r, 1-r); transitions 0 -> 0 w.p. r, 0 -> 1 w.p. 1-r, 1 -> 0 w.p. 1.
struct MarkovParams {
  double r;

  explicit MarkovParams(double r_) : r(r_) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("MarkovParams: r must lie in (0,1)");
  }

  double initial(int symbol) const { return symbol == 0 ? r : 1.0 - r; }
  double transition(int from, int to) const {
    if (from == 0) return to == 0 ? r : 1.0 - r;
    return to == 0 ? 1.0 : 0.0;
  }
};

// (1-r)^{N_1(u)} r^{N_0(u) - N_1(u_1..u_{k-1})} for golden u, zero otherwise.
inline LogProb markov_cylinder_logprob(const MarkovParams& params, const BinaryWord& u) {
  if (!is_golden_word(u)) return LogProb::zero();
  if (u.empty()) return LogProb::one();
  const std::size_t k = u.size();
  const auto ones = static_cast<double>(u.count_ones());
  const auto zeros = static_cast<double>(k) - ones;
  const auto ones_before_last = static_cast<double>(u.count_ones(k - 1));
  double value = 0.0;
  if (ones > 0) value += ones * std::log2(1.0 - params.r);
  if (zeros - ones_before_last > 0) value += (zeros - ones_before_last) * std::log2(params.r);
  return LogProb(value);
}

// Per-block Markov parameters: chain J(i) uses mu(p_{b(i)}), b(i) = floor(log2 i).
// The standard choice is p_0 = p and p_k = p + delta/k; the perturbation can also
// be p +- delta/k^e, or an arbitrary sequence.
class BlockAssignment {
public:
  static BlockAssignment uniform(double p) { return power(p, 0.0, 1.0, +1); }
  static BlockAssignment harmonic(double p, double delta) { return power(p, delta, 1.0, +1); }

  static BlockAssignment power(double p, double delta, double exponent, int sign) {
    if (!(delta >= 0)) throw std::domain_error("BlockAssignment: delta must be nonnegative");
    if (!(exponent > 0)) throw std::domain_error("BlockAssignment: exponent must be positive");
    BlockAssignment a;
    a.p_ = p;
    a.delta_ = delta;
    a.exponent_ = exponent;
    a.sign_ = sign >= 0 ? +1 : -1;
    a.check(1);
    a.check(0);
    return a;
  }

  static BlockAssignment custom(double p, std::function<double(unsigned)> fn, std::string name) {
    BlockAssignment a;
    a.p_ = p;
    a.custom_ = std::move(fn);
    a.name_ = std::move(name);
    a.check(0);
    return a;
  }

  double base() const noexcept { return p_; }
  double delta() const noexcept { return delta_; }
  double exponent() const noexcept { return exponent_; }
  int sign() const noexcept { return sign_; }
  bool is_uniform() const noexcept { return !custom_ && delta_ == 0.0; }

  double parameter(unsigned block) const {
    if (custom_) return check_value(custom_(block));
    if (block == 0 || delta_ == 0.0) return p_;
    return p_ + sign_ * delta_ / std::pow(static_cast<double>(block), exponent_);
  }

  std::string describe() const {
    if (custom_) return "custom(" + name_ + ")";
    if (delta_ == 0.0) return "pmu(p=" + to_fixed(p_) + ")";
    std::string s = "pdelta(p=" + to_fixed(p_) + ",delta=" + to_fixed(delta_);
    if (exponent_ != 1.0) s += ",exponent=" + to_fixed(exponent_);
    if (sign_ < 0) s += ",sign=-";
    return s + ")";
  }

private:
  static std::string to_fixed(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  }
  static double check_value(double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("BlockAssignment: block parameter outside (0,1)");
    return r;
  }
  void check(unsigned block) const { check_value(parameter(block)); }

  double p_ = 0.5;
  double delta_ = 0.0;
  double exponent_ = 1.0;
  int sign_ = +1;
  std::function<double(unsigned)> custom_;
  std::string name_;
};

struct ChainContribution {
  std::uint64_t start;  // odd i
  BinaryWord restriction;
  unsigned block;
  double parameter;
  LogProb contribution;
};

inline std::vector<ChainContribution> chain_breakdown(const BlockAssignment& assign, const BinaryWord& u) {
  std::vector<ChainContribution> rows;
  for (std::uint64_t i = 1; i <= u.size(); i += 2) {
    const ChainIndex chain(i);
    const double r = assign.parameter(chain.block());
    BinaryWord restriction = restrict_to_chain(u, chain);
    const LogProb lp = markov_cylinder_logprob(MarkovParams(r), restriction);
    rows.push_back({i, std::move(restriction), chain.block(), r, lp});
  }
  return rows;
}

// P_delta[u] = prod over odd i <= |u| of mu(p_{b(i)})[u|J(i)].
inline LogProb pdelta_logprob(const BlockAssignment& assign, const BinaryWord& u) {
  LogProb total = LogProb::one();
  for (std::uint64_t i = 1; i <= u.size(); i += 2) {
    const ChainIndex chain(i);
    total += markov_cylinder_logprob(MarkovParams(assign.parameter(chain.block())), restrict_to_chain(u, chain));
    if (total.is_zero()) break;
  }
  return total;
}

inline LogProb pmu_logprob(double p, const BinaryWord& u) { return pdelta_logprob(BlockAssignment::uniform(p), u); }
inline LogProb pmu_logprob(const CertifiedInterval& p, const BinaryWord& u) { return pmu_logprob(p.mid_double(), u); }
inline LogProb pmu_logprob(const BinaryWord& u) { return pmu_logprob(golden_p(), u); }

// The literal positional indexing: for 2^{l-1} < n <= 2^l, chains with
// i in (n/2^k, n/2^{k-1}] use mu_{l-k}. Not Kolmogorov-consistent at block
// boundaries; kept as a diagnostic next to pdelta_logprob.
inline LogProb pdelta_logprob_positional(const BlockAssignment& assign, const BinaryWord& u) {
  const std::uint64_t n = u.size();
  if (n == 0) return LogProb::one();
  const unsigned ell = static_cast<unsigned>(std::bit_width(n - 1));  // 2^{ell-1} < n <= 2^ell
  LogProb total = LogProb::one();
  for (std::uint64_t i = 1; i <= n; i += 2) {
    const ChainIndex chain(i);
    const unsigned k = chain_length(n, chain);
    if (k > ell) continue;  // only possible for n = 1 (ell = 0): empty product
    total += markov_cylinder_logprob(MarkovParams(assign.parameter(ell - k)), restrict_to_chain(u, chain));
  }
  return total;
}

// log2 P_mu[u] - [n log2 p + (N_0(u_1..u_m) - N_0(u)/2) log2 p] for |u| = 2m.
// Vanishes because 1 - p = p^{3/2}.
inline double pmu_identity_gap(const BinaryWord& u, double p) {
  if (u.empty() || u.size() % 2 != 0) throw std::invalid_argument("pmu_identity_gap: word length must be even and positive");
  if (!is_multiplicative_prefix(u)) throw std::invalid_argument("pmu_identity_gap: word is not admissible");
  const double n = static_cast<double>(u.size());
  const double half_zeros = static_cast<double>(u.count_zeros(u.size() / 2));
  const double zeros = static_cast<double>(u.count_zeros());
  const double lp = std::log2(p);
  return pmu_logprob(p, u).value() - (n * lp + (half_zeros - zeros / 2.0) * lp);
}

inline double pmu_identity_gap(const BinaryWord& u) { return pmu_identity_gap(u, golden_p()); }

}  // namespace mgs
