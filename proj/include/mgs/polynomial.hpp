#pragma once

// Exact polynomials over Q, just enough algebra for the entropy family
//   F_0 = 1, F_1 = 1 + x, F_k = 1 + x F_{k-1} + (1 - x) F_{k-2}.

#include <gmpxx.h>

#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "interval.hpp"

namespace mgs {

class RationalPolynomial {
public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<mpq_class> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

  static RationalPolynomial constant(const mpq_class& c) { return RationalPolynomial({c}); }
  static RationalPolynomial monomial(unsigned degree, const mpq_class& c = 1) {
    std::vector<mpq_class> v(degree + 1, mpq_class(0));
    v[degree] = c;
    return RationalPolynomial(std::move(v));
  }

  // Degree of the zero polynomial is reported as -1.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<mpq_class>& coefficients() const noexcept { return coeffs_; }
  mpq_class coefficient(unsigned i) const { return i < coeffs_.size() ? coeffs_[i] : mpq_class(0); }

  friend RationalPolynomial operator+(const RationalPolynomial& a, const RationalPolynomial& b) {
    std::vector<mpq_class> v(std::max(a.coeffs_.size(), b.coeffs_.size()), mpq_class(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) v[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) v[i] += b.coeffs_[i];
    return RationalPolynomial(std::move(v));
  }
  friend RationalPolynomial operator-(const RationalPolynomial& a, const RationalPolynomial& b) {
    return a + b * constant(-1);
  }
  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpq_class> v(a.coeffs_.size() + b.coeffs_.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return RationalPolynomial(std::move(v));
  }
  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

  // Long division; returns {quotient, remainder}.
  std::pair<RationalPolynomial, RationalPolynomial> divide(const RationalPolynomial& divisor) const {
    if (divisor.is_zero()) throw std::domain_error("RationalPolynomial: division by zero polynomial");
    std::vector<mpq_class> rem = coeffs_;
    const int dd = divisor.degree();
    if (degree() < dd) return {RationalPolynomial(), *this};
    std::vector<mpq_class> quot(static_cast<std::size_t>(degree() - dd + 1), mpq_class(0));
    const mpq_class lead = divisor.coeffs_.back();
    for (int i = degree(); i >= dd; --i) {
      const mpq_class q = rem[static_cast<std::size_t>(i)] / lead;
      quot[static_cast<std::size_t>(i - dd)] = q;
      for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(i - dd + j)] -= q * divisor.coeffs_[static_cast<std::size_t>(j)];
    }
    return {RationalPolynomial(std::move(quot)), RationalPolynomial(std::move(rem))};
  }

  RationalPolynomial derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<mpq_class> v(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
    return RationalPolynomial(std::move(v));
  }

  mpq_class evaluate(const mpq_class& x) const {
    mpq_class acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  double evaluate(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
    return acc;
  }

  CertifiedInterval evaluate(const CertifiedInterval& x) const {
    CertifiedInterval acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + CertifiedInterval(*it);
    return acc;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      const mpq_class& c = coeffs_[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      if (!out.empty()) out += c > 0 ? " + " : " - ";
      else if (c < 0) out += "-";
      const mpq_class mag = abs(c);
      if (mag != 1 || i == 0) out += mag.get_str();
      if (i >= 1) out += (mag != 1 ? "*x" : "x");
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
  }

private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<mpq_class> coeffs_;
};

// F_k built by the recurrence, with its derivative cached alongside.
class EntropyPolynomial {
public:
  EntropyPolynomial(unsigned k, RationalPolynomial poly)
      : index_(k), poly_(std::move(poly)), derivative_(poly_.derivative()) {}

  unsigned index() const noexcept { return index_; }
  const RationalPolynomial& polynomial() const noexcept { return poly_; }
  const RationalPolynomial& derivative() const noexcept { return derivative_; }

  template <class T>
  auto operator()(const T& x) const { return poly_.evaluate(x); }

private:
  unsigned index_;
  RationalPolynomial poly_;
  RationalPolynomial derivative_;
};

namespace detail {

inline EntropyPolynomial entropy_poly_cached(unsigned k) {
  static std::vector<EntropyPolynomial> table;
  static std::mutex guard;
  std::lock_guard lock(guard);
  if (table.empty()) {
    table.emplace_back(0, RationalPolynomial::constant(1));
    table.emplace_back(1, RationalPolynomial({mpq_class(1), mpq_class(1)}));
  }
  const RationalPolynomial x = RationalPolynomial::monomial(1);
  const RationalPolynomial one = RationalPolynomial::constant(1);
  while (table.size() <= k) {
    const auto n = static_cast<unsigned>(table.size());
    table.emplace_back(n, one + x * table[n - 1].polynomial() + (one - x) * table[n - 2].polynomial());
  }
  return table[k];
}

}  // namespace detail

inline EntropyPolynomial entropy_poly(unsigned k) { return detail::entropy_poly_cached(k); }

// ((x-1)^{k+2} - (k+2)x + (2k+3)) / (x-2)^2, by exact long division. Throws if the
// division is not exact.
inline RationalPolynomial entropy_poly_closed_form(unsigned k) {
  const RationalPolynomial x = RationalPolynomial::monomial(1);
  const RationalPolynomial x_minus_1 = x - RationalPolynomial::constant(1);
  RationalPolynomial power = RationalPolynomial::constant(1);
  for (unsigned e = 0; e < k + 2; ++e) power = power * x_minus_1;
  const RationalPolynomial numerator =
      power - x * RationalPolynomial::constant(k + 2) + RationalPolynomial::constant(2 * k + 3);
  const RationalPolynomial x_minus_2 = x - RationalPolynomial::constant(2);
  auto [quotient, remainder] = numerator.divide(x_minus_2 * x_minus_2);
  if (!remainder.is_zero()) throw std::logic_error("entropy_poly_closed_form: division not exact");
  return quotient;
}

}  // namespace mgs
