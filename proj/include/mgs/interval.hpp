#pragma once

// Rational-endpoint enclosures with outward rounding.
//
// Endpoints are exact rationals. Every arithmetic result is first computed
// exactly and then widened to dyadic endpoints with kWorkingPrecision
// significant bits, which keeps endpoint sizes bounded. Transcendentals go
// through MPFR with directed rounding, so the returned interval always
// contains the true image.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mgs {

inline constexpr mpfr_prec_t kWorkingPrecision = 128;

class CertificationFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class MpfrValue {
public:
  explicit MpfrValue(mpfr_prec_t prec = kWorkingPrecision) { mpfr_init2(value_, prec); }
  ~MpfrValue() { mpfr_clear(value_); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }

  mpq_class to_rational() const {
    if (!mpfr_number_p(value_)) throw std::domain_error("MpfrValue: non-finite result");
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), value_);
    return q;
  }

private:
  mpfr_t value_;
};

inline mpq_class round_rational(const mpq_class& q, mpfr_rnd_t mode, mpfr_prec_t prec = kWorkingPrecision) {
  MpfrValue v(prec);
  mpfr_set_q(v.get(), q.get_mpq_t(), mode);
  return v.to_rational();
}

using MpfrUnary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

// f evaluated at the directed roundings of x; valid bounds for monotone increasing f.
inline mpq_class apply_directed(MpfrUnary f, const mpq_class& x, mpfr_rnd_t mode) {
  MpfrValue in, out;
  mpfr_set_q(in.get(), x.get_mpq_t(), mode);
  f(out.get(), in.get(), mode);
  return out.to_rational();
}

inline std::string decimal(const mpq_class& q, int digits, mpfr_rnd_t mode) {
  MpfrValue v;
  mpfr_set_q(v.get(), q.get_mpq_t(), mode);
  char* text = nullptr;
  mpfr_asprintf(&text, "%.*R*f", digits, mode, v.get());
  std::string s(text);
  mpfr_free_str(text);
  return s;
}

}  // namespace detail

class CertifiedInterval {
public:
  CertifiedInterval() : lo_(0), hi_(0) {}
  explicit CertifiedInterval(const mpq_class& point) : lo_(point), hi_(point) {}
  CertifiedInterval(const mpq_class& lo, const mpq_class& hi) : lo_(lo), hi_(hi) {
    if (lo_ > hi_) throw std::invalid_argument("CertifiedInterval: lo > hi");
  }

  static CertifiedInterval from_double(double x) { return CertifiedInterval(mpq_class(x)); }
  static CertifiedInterval from_int(long x) { return CertifiedInterval(mpq_class(x)); }

  const mpq_class& lo() const noexcept { return lo_; }
  const mpq_class& hi() const noexcept { return hi_; }
  mpq_class width() const { return hi_ - lo_; }
  mpq_class midpoint() const { return (lo_ + hi_) / 2; }

  double lo_double() const { return lower_double(lo_); }
  double hi_double() const { return upper_double(hi_); }
  double mid_double() const { return midpoint().get_d(); }
  double width_double() const { return upper_double(hi_ - lo_); }

  bool contains(const mpq_class& x) const { return lo_ <= x && x <= hi_; }
  bool contains(double x) const { return contains(mpq_class(x)); }
  bool contains(const CertifiedInterval& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }

  bool is_positive() const { return lo_ > 0; }
  bool is_negative() const { return hi_ < 0; }
  bool contains_zero() const { return lo_ <= 0 && 0 <= hi_; }

  // Widens the endpoints to kWorkingPrecision-bit dyadics.
  CertifiedInterval rounded() const {
    CertifiedInterval r;
    r.lo_ = detail::round_rational(lo_, MPFR_RNDD);
    r.hi_ = detail::round_rational(hi_, MPFR_RNDU);
    return r;
  }

  CertifiedInterval widened(const mpq_class& radius) const {
    if (radius < 0) throw std::invalid_argument("CertifiedInterval::widened: negative radius");
    return CertifiedInterval(lo_ - radius, hi_ + radius);
  }

  // Smallest interval containing both.
  CertifiedInterval hull(const CertifiedInterval& other) const {
    return CertifiedInterval(std::min(lo_, other.lo_), std::max(hi_, other.hi_));
  }

  CertifiedInterval operator-() const { return CertifiedInterval(-hi_, -lo_); }

  friend CertifiedInterval operator+(const CertifiedInterval& a, const CertifiedInterval& b) {
    return CertifiedInterval(a.lo_ + b.lo_, a.hi_ + b.hi_).rounded();
  }
  friend CertifiedInterval operator-(const CertifiedInterval& a, const CertifiedInterval& b) {
    return CertifiedInterval(a.lo_ - b.hi_, a.hi_ - b.lo_).rounded();
  }
  friend CertifiedInterval operator*(const CertifiedInterval& a, const CertifiedInterval& b) {
    const mpq_class p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_, p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
    return CertifiedInterval(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})).rounded();
  }
  friend CertifiedInterval operator/(const CertifiedInterval& a, const CertifiedInterval& b) {
    if (b.contains_zero()) throw std::domain_error("CertifiedInterval: division by an interval containing 0");
    const mpq_class q1 = a.lo_ / b.lo_, q2 = a.lo_ / b.hi_, q3 = a.hi_ / b.lo_, q4 = a.hi_ / b.hi_;
    return CertifiedInterval(std::min({q1, q2, q3, q4}), std::max({q1, q2, q3, q4})).rounded();
  }

  CertifiedInterval& operator+=(const CertifiedInterval& b) { return *this = *this + b; }
  CertifiedInterval& operator-=(const CertifiedInterval& b) { return *this = *this - b; }
  CertifiedInterval& operator*=(const CertifiedInterval& b) { return *this = *this * b; }

  // Exact endpoints as "num/den" strings.
  std::string lo_string() const { return lo_.get_str(); }
  std::string hi_string() const { return hi_.get_str(); }

  // Decimal endpoints rounded outward.
  std::string to_decimal(int digits = 12) const {
    return "[" + detail::decimal(lo_, digits, MPFR_RNDD) + ", " + detail::decimal(hi_, digits, MPFR_RNDU) + "]";
  }

  friend std::ostream& operator<<(std::ostream& os, const CertifiedInterval& x) { return os << x.to_decimal(); }

private:
  static double lower_double(const mpq_class& q) {
    detail::MpfrValue v(53);
    mpfr_set_q(v.get(), q.get_mpq_t(), MPFR_RNDD);
    return mpfr_get_d(v.get(), MPFR_RNDD);
  }
  static double upper_double(const mpq_class& q) {
    detail::MpfrValue v(53);
    mpfr_set_q(v.get(), q.get_mpq_t(), MPFR_RNDU);
    return mpfr_get_d(v.get(), MPFR_RNDU);
  }

  mpq_class lo_, hi_;
};

inline CertifiedInterval pow(const CertifiedInterval& x, unsigned exponent) {
  CertifiedInterval result = CertifiedInterval::from_int(1);
  for (unsigned e = 0; e < exponent; ++e) result *= x;
  if (exponent % 2 == 0 && x.contains_zero()) return CertifiedInterval(0, result.hi());
  return result;
}

inline CertifiedInterval ln(const CertifiedInterval& x) {
  if (x.lo() <= 0) throw std::domain_error("ln: interval not strictly positive");
  return CertifiedInterval(detail::apply_directed(mpfr_log, x.lo(), MPFR_RNDD),
                           detail::apply_directed(mpfr_log, x.hi(), MPFR_RNDU));
}

inline CertifiedInterval log2(const CertifiedInterval& x) {
  if (x.lo() <= 0) throw std::domain_error("log2: interval not strictly positive");
  return CertifiedInterval(detail::apply_directed(mpfr_log2, x.lo(), MPFR_RNDD),
                           detail::apply_directed(mpfr_log2, x.hi(), MPFR_RNDU));
}

inline CertifiedInterval exp(const CertifiedInterval& x) {
  return CertifiedInterval(detail::apply_directed(mpfr_exp, x.lo(), MPFR_RNDD),
                           detail::apply_directed(mpfr_exp, x.hi(), MPFR_RNDU));
}

// Enclosure of ln 2, used to move between bits and nats.
inline CertifiedInterval ln2_enclosure() {
  detail::MpfrValue lo, hi;
  mpfr_const_log2(lo.get(), MPFR_RNDD);
  mpfr_const_log2(hi.get(), MPFR_RNDU);
  return CertifiedInterval(lo.to_rational(), hi.to_rational());
}

}  // namespace mgs
