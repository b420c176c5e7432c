#pragma once

// Certified constants and the entropy-polynomial calculus.
//
// p is the root in (0,1) of p^3 = (1-p)^2, i.e. of x^3 - x^2 + 2x - 1 = 0,
// s = -log2 p is the Hausdorff dimension of the multiplicative golden mean
// shift, and dim_M = sum_k 2^{-k-1} log2 F_{k+1} its Minkowski dimension.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibonacci.hpp"
#include "interval.hpp"
#include "polynomial.hpp"
#include "word.hpp"

namespace mgs {

enum class EntropyUnit { bits, nats };

inline const char* to_string(EntropyUnit unit) { return unit == EntropyUnit::bits ? "bits" : "nats"; }

enum class Sign { positive, negative, unknown };

inline const char* to_string(Sign sign) {
  switch (sign) {
    case Sign::positive: return "POSITIVE";
    case Sign::negative: return "NEGATIVE";
    default: return "UNKNOWN";
  }
}

// ---------------------------------------------------------------------------
// p, s and dim_M

// x^3 - x^2 + 2x - 1, the expanded form of x^3 - (1-x)^2.
inline mpq_class golden_cubic(const mpq_class& x) { return ((x - 1) * x + 2) * x - 1; }

// Bisection on exact dyadic rationals. The cubic is strictly increasing
// (derivative 3x^2 - 2x + 2 has no real roots), so the sign bracket is the root.
inline CertifiedInterval solve_p(unsigned width_exponent = 96) {
  mpq_class lo(1, 2), hi(1);
  if (!(golden_cubic(lo) < 0 && golden_cubic(hi) > 0))
    throw CertificationFailure("solve_p: initial bracket lost its sign change");
  mpq_class target(1);
  target /= mpq_class(mpz_class(1) << width_exponent);
  while (hi - lo > target) {
    const mpq_class mid = (lo + hi) / 2;
    (golden_cubic(mid) < 0 ? lo : hi) = mid;
  }
  return CertifiedInterval(lo, hi);
}

inline const CertifiedInterval& p_enclosure() {
  static const CertifiedInterval p = solve_p();
  return p;
}

// Nearest double to p.
inline double golden_p() {
  static const double value = p_enclosure().mid_double();
  return value;
}

inline CertifiedInterval hausdorff_dim() { return -log2(p_enclosure()); }

inline double golden_s() {
  static const double value = hausdorff_dim().mid_double();
  return value;
}

struct MinkowskiDimension {
  double value = 0.0;       // partial sum
  double tail_bound = 0.0;  // (K+2) 2^{-K-1}
  unsigned terms = 0;       // K
  CertifiedInterval enclosure;
};

// Partial sum of 2^{-k-1} log2 F_{k+1} until the tail bound, from log2 F_{k+1} <= k,
// drops below tol.
inline MinkowskiDimension dim_minkowski(double tol) {
  if (!(tol > 0)) throw std::domain_error("dim_minkowski: tol must be positive");
  const auto tail = [](unsigned K) -> mpq_class { return mpq_class(K + 2) / mpq_class(mpz_class(1) << (K + 1)); };
  unsigned K = 1;
  while (tail(K) >= mpq_class(tol)) ++K;

  MinkowskiDimension out;
  out.terms = K;
  CertifiedInterval sum;
  double value = 0.0;
  for (unsigned k = 1; k <= K; ++k) {
    const mpz_class f = fibonacci(k + 1);
    const CertifiedInterval weight(mpq_class(1) / mpq_class(mpz_class(1) << (k + 1)));
    sum += log2(CertifiedInterval(mpq_class(f))) * weight;
    value += std::ldexp(log2_of(f), -static_cast<int>(k) - 1);
  }
  const mpq_class t = tail(K);
  out.value = value;
  out.tail_bound = t.get_d();
  out.enclosure = CertifiedInterval(sum.lo(), sum.hi() + t);
  return out;
}

// ---------------------------------------------------------------------------
// Binary entropy

inline void require_open_unit(double r, const char* who) {
  if (!(r > 0.0 && r < 1.0)) throw std::domain_error(std::string(who) + ": r must lie in (0,1)");
}

inline void require_open_unit(const CertifiedInterval& r, const char* who) {
  if (!(r.lo() > 0 && r.hi() < 1)) throw std::domain_error(std::string(who) + ": enclosure must lie in (0,1)");
}

inline double unit_log(double x, EntropyUnit unit) { return unit == EntropyUnit::bits ? std::log2(x) : std::log(x); }

inline CertifiedInterval unit_log(const CertifiedInterval& x, EntropyUnit unit) {
  return unit == EntropyUnit::bits ? log2(x) : ln(x);
}

// H(r) = -r log r - (1-r) log(1-r).
inline double binary_entropy(double r, EntropyUnit unit = EntropyUnit::bits) {
  require_open_unit(r, "binary_entropy");
  return -r * unit_log(r, unit) - (1.0 - r) * unit_log(1.0 - r, unit);
}

inline CertifiedInterval binary_entropy(const CertifiedInterval& r, EntropyUnit unit = EntropyUnit::bits) {
  require_open_unit(r, "binary_entropy");
  const CertifiedInterval one = CertifiedInterval::from_int(1);
  const CertifiedInterval q = one - r;
  return -(r * unit_log(r, unit)) - q * unit_log(q, unit);
}

// H'(r) = log((1-r)/r).
inline double binary_entropy_derivative(double r, EntropyUnit unit = EntropyUnit::bits) {
  require_open_unit(r, "binary_entropy_derivative");
  return unit_log(1.0 - r, unit) - unit_log(r, unit);
}

inline CertifiedInterval binary_entropy_derivative(const CertifiedInterval& r, EntropyUnit unit = EntropyUnit::bits) {
  require_open_unit(r, "binary_entropy_derivative");
  return unit_log(CertifiedInterval::from_int(1) - r, unit) - unit_log(r, unit);
}

// Entropy (bits) of the length-k cylinder partition under the Markov measure mu(r):
// H(r) F_{k-1}(r).
inline double partition_entropy(double r, unsigned k) {
  require_open_unit(r, "partition_entropy");
  if (k == 0) throw std::domain_error("partition_entropy: k must be positive");
  return binary_entropy(r) * entropy_poly(k - 1)(r);
}

// ---------------------------------------------------------------------------
// Exact tails of sum_{k >= m} q(k) / 2^{k+1}

// Uses sum_{j>=0} r(j)/2^j = 2 sum_i (Delta^i r)(0) for polynomial r, with r(j) = q(m+j).
inline mpq_class dyadic_polynomial_tail(const RationalPolynomial& q, unsigned m) {
  const int d = q.degree();
  if (d < 0) return 0;
  std::vector<mpq_class> values(static_cast<std::size_t>(d) + 1);
  for (int j = 0; j <= d; ++j) values[static_cast<std::size_t>(j)] = q.evaluate(mpq_class(m + static_cast<unsigned>(j)));
  mpq_class total = 0;
  for (int order = 0; order <= d; ++order) {
    total += values[0];
    for (std::size_t j = 0; j + 1 < values.size() - static_cast<std::size_t>(order); ++j)
      values[j] = values[j + 1] - values[j];
  }
  return total / mpq_class(mpz_class(1) << m);
}

// Upper bound for |F_k(r)|: 3 + 3k/2 on (1/2,1); the cruder (2k+4) elsewhere in (0,1),
// from |(r-1)^{k+2}| <= 1, (k+2)r >= 0 and (2-r)^2 >= 1.
inline RationalPolynomial entropy_poly_bound(double r) {
  if (r > 0.5) return RationalPolynomial({mpq_class(3), mpq_class(3, 2)});
  return RationalPolynomial({mpq_class(4), mpq_class(2)});
}

inline double A_closed(double r) {
  require_open_unit(r, "A_closed");
  return 2.0 * binary_entropy(r) / (3.0 - r);
}

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

// H(r) sum_{k<=K} F_{k-1}(r)/2^{k+1}, with a tail bound from the |F_k| bound above.
inline SeriesValue A_series(double r, unsigned K) {
  require_open_unit(r, "A_series");
  if (K == 0) throw std::domain_error("A_series: K must be positive");
  const double h = binary_entropy(r);
  double sum = 0.0;
  for (unsigned k = 1; k <= K; ++k) sum += entropy_poly(k - 1)(r) * std::ldexp(1.0, -static_cast<int>(k) - 1);
  // term k uses F_{k-1}: substitute k-1 into the bound polynomial.
  const RationalPolynomial bound = entropy_poly_bound(r);
  const RationalPolynomial shifted({bound.coefficient(0) - bound.coefficient(1), bound.coefficient(1)});
  return {h * sum, h * dyadic_polynomial_tail(shifted, K + 1).get_d()};
}

// ---------------------------------------------------------------------------
// (H F_{k-1})'(x) and the series built from it

inline void require_upper_half(const CertifiedInterval& x, const char* who) {
  if (!(x.lo() > mpq_class(1, 2) && x.hi() < 1))
    throw std::domain_error(std::string(who) + ": enclosure must lie in (1/2,1)");
}

inline CertifiedInterval hf_derivative_at(unsigned k, const CertifiedInterval& x, EntropyUnit unit = EntropyUnit::nats) {
  if (k == 0) throw std::domain_error("hf_derivative_at: k must be positive");
  require_upper_half(x, "hf_derivative_at");
  const EntropyPolynomial F = entropy_poly(k - 1);
  return binary_entropy(x, unit) * F.derivative().evaluate(x) + binary_entropy_derivative(x, unit) * F(x);
}

// Bounds H(p) < h and |H'(p)| < h_prime used by the series tails:
// 0.7 and 0.3 in nats, scaled by an upper bound of log2(e) for bits.
struct EntropyBounds {
  mpq_class h;
  mpq_class h_prime;
};

inline EntropyBounds entropy_bounds_at_p(EntropyUnit unit) {
  EntropyBounds b{mpq_class(7, 10), mpq_class(3, 10)};
  if (unit == EntropyUnit::bits) {
    const mpq_class log2e_upper(14427, 10000);
    b.h *= log2e_upper;
    b.h_prime *= log2e_upper;
  }
  const CertifiedInterval& p = p_enclosure();
  const CertifiedInterval h = binary_entropy(p, unit);
  const CertifiedInterval hp = binary_entropy_derivative(p, unit);
  if (!(h.hi() < b.h)) throw CertificationFailure("H(p) bound could not be certified");
  if (!(-hp.lo() < b.h_prime && hp.hi() < b.h_prime))
    throw CertificationFailure("|H'(p)| bound could not be certified");
  return b;
}

// Tail bound for sum_{k>K} k^e |(H F_{k-1})'(p)| / 2^{k+1}, using
// |F_{k-1}(p)| < (3k+3)/2 and |F'_{k-1}(p)| < 3k+3.
inline mpq_class hf_derivative_tail(unsigned K, unsigned weight_exponent, EntropyUnit unit) {
  const EntropyBounds b = entropy_bounds_at_p(unit);
  const mpq_class scale = 3 * (b.h + b.h_prime / 2);
  RationalPolynomial q({scale, scale});  // scale * (k + 1)
  q = q * RationalPolynomial::monomial(weight_exponent);
  return dyadic_polynomial_tail(q, K + 1);
}

// sum_{k<=K} (H F_{k-1})'(p) / 2^{k+1}, widened by the tail bound; encloses the full sum.
inline CertifiedInterval derivative_series_at_p(unsigned K, EntropyUnit unit = EntropyUnit::nats) {
  if (K == 0) throw std::domain_error("derivative_series_at_p: K must be positive");
  const CertifiedInterval& p = p_enclosure();
  CertifiedInterval sum;
  for (unsigned k = 1; k <= K; ++k)
    sum += hf_derivative_at(k, p, unit) * CertifiedInterval(mpq_class(1) / mpq_class(mpz_class(1) << (k + 1)));
  return sum.widened(hf_derivative_tail(K, 0, unit));
}

struct TauCertificate {
  CertifiedInterval partial_12;  // sum_{k<=12} k (H F_{k-1})'(p) / 2^{k+1}, nats
  CertifiedInterval tail_bound;  // sum_{k>=13} 3k(k+1) / 2^{k+1}, exact
  mpq_class lower_bound;         // partial_12.lo - tail_bound.hi
  CertifiedInterval entropy_at_p;
  CertifiedInterval entropy_derivative_at_p;
  Sign sign = Sign::unknown;
};

inline CertifiedInterval tau_partial_sum(unsigned K, EntropyUnit unit = EntropyUnit::nats) {
  const CertifiedInterval& p = p_enclosure();
  CertifiedInterval sum;
  for (unsigned k = 1; k <= K; ++k)
    sum += hf_derivative_at(k, p, unit) * CertifiedInterval(mpq_class(k) / mpq_class(mpz_class(1) << (k + 1)));
  return sum;
}

inline TauCertificate tau_certify() {
  TauCertificate c;
  c.entropy_at_p = binary_entropy(p_enclosure(), EntropyUnit::nats);
  c.entropy_derivative_at_p = binary_entropy_derivative(p_enclosure(), EntropyUnit::nats);
  // The crude tail inequality needs H(p) < 0.7 and |H'(p)| < 0.3 (nats).
  entropy_bounds_at_p(EntropyUnit::nats);
  c.partial_12 = tau_partial_sum(12);
  const RationalPolynomial tail_poly({mpq_class(0), mpq_class(3), mpq_class(3)});  // 3k(k+1)
  c.tail_bound = CertifiedInterval(dyadic_polynomial_tail(tail_poly, 13));
  c.lower_bound = c.partial_12.lo() - c.tail_bound.hi();
  if (!(c.lower_bound > 0)) throw CertificationFailure("tau > 0 could not be certified");
  c.sign = Sign::positive;
  return c;
}

struct TauGammaResult {
  CertifiedInterval partial;
  double value = 0.0;
  mpq_class tail_bound;
  Sign sign = Sign::unknown;
};

// sum_{k<=K} k^{1+gamma} (H F_{k-1})'(p) / 2^{k+1}; the tail uses k^{1+gamma} <= k^{ceil(1+gamma)}.
inline TauGammaResult tau_gamma(double gamma, unsigned K, EntropyUnit unit = EntropyUnit::nats) {
  if (!(gamma > 0)) throw std::domain_error("tau_gamma: gamma must be positive");
  if (K == 0) throw std::domain_error("tau_gamma: K must be positive");
  const CertifiedInterval& p = p_enclosure();
  const CertifiedInterval exponent = CertifiedInterval::from_int(1) + CertifiedInterval::from_double(gamma);
  TauGammaResult out;
  for (unsigned k = 1; k <= K; ++k) {
    const CertifiedInterval weight = k == 1 ? CertifiedInterval::from_int(1)
                                            : exp(exponent * ln(CertifiedInterval::from_int(static_cast<long>(k))));
    out.partial += weight * hf_derivative_at(k, p, unit) *
                   CertifiedInterval(mpq_class(1) / mpq_class(mpz_class(1) << (k + 1)));
  }
  out.value = out.partial.mid_double();
  out.tail_bound = hf_derivative_tail(K, static_cast<unsigned>(std::ceil(1.0 + gamma)), unit);
  if (out.partial.lo() - out.tail_bound > 0)
    out.sign = Sign::positive;
  else if (out.partial.hi() + out.tail_bound < 0)
    out.sign = Sign::negative;
  return out;
}

// ---------------------------------------------------------------------------
// Zero counts

// L_k = E[N_0(u)], |u| = k, under mu(r): k/(2-r) - (1 - (r-1)^k)(r-1)^2/(2-r)^2.
inline double expected_zero_count_chain(double r, unsigned k) {
  if (k == 0) throw std::domain_error("expected_zero_count_chain: k must be positive");
  require_open_unit(r, "expected_zero_count_chain");
  const double a = r - 1.0, b = 2.0 - r;
  return k / b - (1.0 - std::pow(a, static_cast<int>(k))) * a * a / (b * b);
}

// E[N_0(x_1^n)] under P_mu(r): sum over chain lengths k of A_k L_k.
inline double expected_zero_count_prefix(std::uint64_t n, double r) {
  if (n == 0) throw std::domain_error("expected_zero_count_prefix: n must be positive");
  const auto counts = chain_length_counts(n);
  double total = 0.0;
  for (unsigned k = 1; k < counts.size(); ++k)
    if (counts[k] != 0) total += static_cast<double>(counts[k]) * expected_zero_count_chain(r, k);
  return total;
}

inline double expected_zero_count_prefix(std::uint64_t n) { return expected_zero_count_prefix(n, golden_p()); }

}  // namespace mgs
