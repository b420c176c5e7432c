#pragma once

// Small descriptive and trend statistics for experiment reports.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace mgs {

// Linear-interpolation quantile (R type 7).
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0 && q <= 1)) throw std::domain_error("quantile: q must lie in [0,1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

inline double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean: empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

enum class Trend { decreasing, increasing, inconclusive };

inline const char* to_string(Trend t) {
  switch (t) {
    case Trend::decreasing: return "DECREASING";
    case Trend::increasing: return "INCREASING";
    case Trend::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

inline Trend parse_trend(const std::string& s) {
  if (s == "DECREASING") return Trend::decreasing;
  if (s == "INCREASING") return Trend::increasing;
  if (s == "INCONCLUSIVE") return Trend::inconclusive;
  throw std::invalid_argument("parse_trend: unknown verdict '" + s + "'");
}

struct TheilSen {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_lo = 0.0;  // Sen's rank-based confidence bounds
  double slope_hi = 0.0;
  double confidence = 0.95;
  std::size_t points = 0;
};

// Median of pairwise slopes, with the Kendall-statistic confidence interval
// (Sen 1968): order statistics of the slopes at (M -+ z sqrt(Var S))/2.
inline TheilSen theil_sen(const std::vector<double>& x, const std::vector<double>& y, double confidence = 0.95) {
  if (x.size() != y.size()) throw std::invalid_argument("theil_sen: size mismatch");
  if (x.size() < 3) throw std::invalid_argument("theil_sen: need at least 3 points");
  std::vector<double> slopes;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (x[j] == x[i]) continue;
      slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
    }
  if (slopes.empty()) throw std::invalid_argument("theil_sen: all x equal");
  std::sort(slopes.begin(), slopes.end());

  TheilSen out;
  out.points = x.size();
  out.confidence = confidence;
  out.slope = median(slopes);
  std::vector<double> residual(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) residual[i] = y[i] - out.slope * x[i];
  out.intercept = median(residual);

  const double N = static_cast<double>(x.size());
  const double M = static_cast<double>(slopes.size());
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2);
  const double C = z * std::sqrt(N * (N - 1) * (2 * N + 5) / 18.0);
  // 1-based ranks, clamped to the available slopes.
  const auto rank = [&](double r) {
    const double clamped = std::clamp(std::round(r), 1.0, M);
    return slopes[static_cast<std::size_t>(clamped) - 1];
  };
  out.slope_lo = rank((M - C) / 2);
  out.slope_hi = rank((M + C) / 2 + 1);
  return out;
}

inline Trend trend_of(const TheilSen& fit) {
  if (fit.slope_hi < 0) return Trend::decreasing;
  if (fit.slope_lo > 0) return Trend::increasing;
  return Trend::inconclusive;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  double slope_lo = 0.0;  // t-based confidence interval
  double slope_hi = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

inline LinearFit ordinary_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                                        double confidence = 0.95) {
  if (x.size() != y.size()) throw std::invalid_argument("ordinary_least_squares: size mismatch");
  if (x.size() < 3) throw std::invalid_argument("ordinary_least_squares: need at least 3 points");
  const double n = static_cast<double>(x.size());
  const double mx = mean(x), my = mean(y);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("ordinary_least_squares: all x equal");
  LinearFit fit;
  fit.points = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    sse += r * r;
  }
  const double sigma2 = sse / (n - 2);
  fit.slope_se = std::sqrt(sigma2 / sxx);
  fit.intercept_se = std::sqrt(sigma2 * (1.0 / n + mx * mx / sxx));
  const double tq = boost::math::quantile(boost::math::students_t(n - 2), 0.5 + confidence / 2);
  fit.slope_lo = fit.slope - tq * fit.slope_se;
  fit.slope_hi = fit.slope + tq * fit.slope_se;
  fit.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

}  // namespace mgs
