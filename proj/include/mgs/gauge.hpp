#pragma once

// Gauge functions in base-2 logarithmic form, evaluated at the cylinder
// diameter 2^{-n}:
//   PURE_S     t^s                                   -> -ns
//   PHI        t^s exp[-c |log t| / (log|log t|)^2]   -> -ns - c n/(log2 n)^2
//   PSI_THETA  t^s exp[-|log t| / (log|log t|)^th]   -> -ns - n/(log2 n)^th
//   PHI_GAMMA  like PHI with exponent 2 + gamma      -> -ns - c n/(log2 n)^(2+gamma)
//   PSI_G      t^s exp[-|log2 t| / g(log2|log2 t|)]  -> -ns - n/((ln 2) g(log2 n))

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mgs {

enum class GaugeFamily { pure_s, phi, psi_theta, phi_gamma, psi_g };

struct Gauge {
  GaugeFamily family = GaugeFamily::pure_s;
  double s = 0.0;
  double c = 0.0;
  double theta = 0.0;
  double gamma = 0.0;
  std::function<double(double)> g;
  std::string g_name;

  static Gauge pure(double s) { return Gauge{GaugeFamily::pure_s, s, 0, 0, 0, {}, {}}; }
  static Gauge phi(double s, double c) {
    if (!(c > 0)) throw std::invalid_argument("Gauge::phi: c must be positive");
    return Gauge{GaugeFamily::phi, s, c, 0, 0, {}, {}};
  }
  static Gauge psi_theta(double s, double theta) { return Gauge{GaugeFamily::psi_theta, s, 0, theta, 0, {}, {}}; }
  static Gauge phi_gamma(double s, double c, double gamma) {
    if (!(c > 0 && gamma > 0)) throw std::invalid_argument("Gauge::phi_gamma: c and gamma must be positive");
    return Gauge{GaugeFamily::phi_gamma, s, c, 0, gamma, {}, {}};
  }
  static Gauge psi_g(double s, std::function<double(double)> g, std::string name) {
    if (!g) throw std::invalid_argument("Gauge::psi_g: g must be callable");
    return Gauge{GaugeFamily::psi_g, s, 0, 0, 0, std::move(g), std::move(name)};
  }

  std::string describe() const {
    switch (family) {
      case GaugeFamily::pure_s: return "pure(s=" + std::to_string(s) + ")";
      case GaugeFamily::phi: return "phi(s=" + std::to_string(s) + ",c=" + std::to_string(c) + ")";
      case GaugeFamily::psi_theta: return "psi(s=" + std::to_string(s) + ",theta=" + std::to_string(theta) + ")";
      case GaugeFamily::phi_gamma:
        return "phi_gamma(s=" + std::to_string(s) + ",c=" + std::to_string(c) + ",gamma=" + std::to_string(gamma) + ")";
      case GaugeFamily::psi_g: return "psi_g(s=" + std::to_string(s) + ",g=" + g_name + ")";
    }
    return "?";
  }
};

namespace detail {

// No domain check; PSI_G also makes sense at n = 2 (log2 n = 1).
inline double gauge_log2_unchecked(const Gauge& gauge, double n) {
  const double L = std::log2(n);
  const double base = -n * gauge.s;
  switch (gauge.family) {
    case GaugeFamily::pure_s: return base;
    case GaugeFamily::phi: return base - gauge.c * n / (L * L);
    case GaugeFamily::psi_theta: return base - n / std::pow(L, gauge.theta);
    case GaugeFamily::phi_gamma: return base - gauge.c * n / std::pow(L, 2.0 + gauge.gamma);
    case GaugeFamily::psi_g: return base - n / (std::numbers::ln2 * gauge.g(L));
  }
  return base;
}

}  // namespace detail

// log2 gauge(2^{-n}), n >= 4.
inline double gauge_log2(const Gauge& gauge, std::uint64_t n) {
  if (n < 4) throw std::domain_error("gauge_log2: n must be at least 4");
  return detail::gauge_log2_unchecked(gauge, static_cast<double>(n));
}

}  // namespace mgs
