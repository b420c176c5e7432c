#pragma once

// Monte Carlo and enumeration experiments on the density behaviour of
// P_mu / P_delta against gauge functions, and on the deviation bounds.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "analytics.hpp"
#include "fibonacci.hpp"
#include "gauge.hpp"
#include "measures.hpp"
#include "random.hpp"
#include "sampling.hpp"
#include "stats.hpp"

namespace mgs {

inline constexpr std::uint64_t kDefaultTrendFrom = std::uint64_t{1} << 12;
inline constexpr double kDefaultEpsilon = 0.25;
inline constexpr std::size_t kDefaultSeeds = 100;
inline constexpr std::size_t kDefaultLowerSeeds = 1000;

inline const std::vector<double> kHoeffdingTGrid{0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0};
inline const std::vector<std::uint64_t> kHoeffdingNGrid{10, 100, 1000};
inline const std::vector<double> kLdevTGrid{0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0, 1.5};
inline const std::vector<std::uint64_t> kLdevNGrid{16, 64, 256, 1024};

// {2^from, ..., 2^to}.
inline std::vector<std::uint64_t> dyadic_grid(unsigned from, unsigned to) {
  if (from > to || to > 40) throw std::invalid_argument("dyadic_grid: need from <= to <= 40");
  std::vector<std::uint64_t> grid;
  for (unsigned e = from; e <= to; ++e) grid.push_back(std::uint64_t{1} << e);
  return grid;
}

// base, base+1, ..., base+count-1.
inline std::vector<std::uint64_t> seed_list(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t j = 0; j < count; ++j) seeds[j] = base + j;
  return seeds;
}

// ---------------------------------------------------------------------------
// Trajectories

struct SummaryRow {
  std::uint64_t n = 0;
  double median = 0, q1 = 0, q3 = 0, mean = 0, min = 0, max = 0;
};

struct TrendResult {
  Trend verdict = Trend::inconclusive;
  TheilSen fit;
  std::uint64_t from_n = kDefaultTrendFrom;
  std::size_t points = 0;
  bool forced = false;
  std::string note;
};

struct TrajectoryReport {
  std::string experiment;
  std::string measure;
  std::string gauge;
  std::vector<std::uint64_t> n_grid;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> series;  // series[seed][grid point]
  std::vector<SummaryRow> summary;
  TrendResult trend;
  bool all_admissible = true;
  bool zero_count_decomposition_holds = true;
  std::optional<double> max_pmu_identity_gap;  // only for P_mu at the golden p
  double epsilon = kDefaultEpsilon;
  std::vector<double> deviation_event_frequency;  // lower-bound experiment only
};

inline std::vector<SummaryRow> summarize(const std::vector<std::uint64_t>& n_grid,
                                         const std::vector<std::vector<double>>& series) {
  std::vector<SummaryRow> rows;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    std::vector<double> column;
    column.reserve(series.size());
    for (const auto& s : series) column.push_back(s.at(g));
    SummaryRow r;
    r.n = n_grid[g];
    r.median = median(column);
    r.q1 = quantile(column, 0.25);
    r.q3 = quantile(column, 0.75);
    r.mean = mean(column);
    r.min = *std::min_element(column.begin(), column.end());
    r.max = *std::max_element(column.begin(), column.end());
    rows.push_back(r);
  }
  return rows;
}

// Theil-Sen trend of the median series against log2 n over grid points n >= from_n.
// The verdict only depends on the signs of pairwise slopes, so the choice of
// increasing x-transform does not matter.
inline TrendResult median_trend(const std::vector<SummaryRow>& summary, std::uint64_t from_n) {
  TrendResult t;
  t.from_n = from_n;
  std::vector<double> x, y;
  for (const auto& r : summary)
    if (r.n >= from_n) {
      x.push_back(std::log2(static_cast<double>(r.n)));
      y.push_back(r.median);
    }
  t.points = x.size();
  if (x.size() < 3) {
    t.note = "fewer than 3 grid points at or beyond the trend start";
    return t;
  }
  t.fit = theil_sen(x, y);
  t.verdict = trend_of(t.fit);
  return t;
}

namespace detail {

inline void check_grid(const std::vector<std::uint64_t>& n_grid, std::uint64_t min_n, const char* who) {
  if (n_grid.empty()) throw std::invalid_argument(std::string(who) + ": empty n grid");
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    if (n_grid[g] < min_n) throw std::invalid_argument(std::string(who) + ": grid values below minimum");
    if (g > 0 && n_grid[g] <= n_grid[g - 1]) throw std::invalid_argument(std::string(who) + ": grid must be ascending");
  }
  if (n_grid.back() > (std::uint64_t{1} << 28)) throw std::invalid_argument(std::string(who) + ": n above 2^28");
}

}  // namespace detail

// d_n = log2 P[x_1^n] - log2 gauge(2^{-n}) along one sampled point per seed.
inline TrajectoryReport density_trajectory(const BlockAssignment& measure, const Gauge& gauge,
                                           const std::vector<std::uint64_t>& n_grid,
                                           const std::vector<std::uint64_t>& seeds,
                                           std::uint64_t trend_from = kDefaultTrendFrom) {
  detail::check_grid(n_grid, 4, "density_trajectory");
  if (seeds.empty()) throw std::invalid_argument("density_trajectory: no seeds");

  TrajectoryReport rep;
  rep.experiment = "density";
  rep.measure = measure.describe();
  rep.gauge = gauge.describe();
  rep.n_grid = n_grid;
  rep.seeds = seeds;

  const bool golden_pmu = measure.is_uniform() && measure.base() == golden_p();
  const double s = golden_s();
  double worst_gap = 0.0;

  for (std::uint64_t seed : seeds) {
    const ChainSample sample(measure, n_grid.back(), seed);
    const BinaryWord word = sample.word();
    rep.all_admissible = rep.all_admissible && is_multiplicative_prefix(word);
    std::vector<double> row;
    row.reserve(n_grid.size());
    for (std::uint64_t n : n_grid) {
      const double lp = sample.log2_prob(n);
      const double d = lp - gauge_log2(gauge, n);
      if (!std::isfinite(d)) throw std::logic_error("density_trajectory: non-finite d_n");
      row.push_back(d);
      const std::uint64_t zeros = sample.zeros(n);
      rep.zero_count_decomposition_holds = rep.zero_count_decomposition_holds && zeros == word.count_zeros(n);
      if (golden_pmu && n % 2 == 0) {
        const double rhs = s * (static_cast<double>(zeros) / 2 - static_cast<double>(sample.zeros(n / 2)));
        worst_gap = std::max(worst_gap, std::abs(lp + static_cast<double>(n) * s - rhs));
      }
    }
    rep.series.push_back(std::move(row));
  }
  if (golden_pmu) rep.max_pmu_identity_gap = worst_gap;
  rep.summary = summarize(rep.n_grid, rep.series);
  rep.trend = median_trend(rep.summary, trend_from);
  return rep;
}

// sum_{k>=1} 2^{-(k+1) eps}.
inline double b_epsilon(double eps) {
  const double x = std::exp2(-eps);
  return x * x / (1 - x);
}

// Threshold of the deviation event at prefix length n: -sum over chains of
// length k <= floor(l/2) of H^{mu_b(i)}(alpha_k), plus b_eps n^{1-eps}, with 2^{l-1} < n <= 2^l.
inline double deviation_threshold(const BlockAssignment& measure, std::uint64_t n, double eps) {
  if (n < 2) throw std::domain_error("deviation_threshold: n must be at least 2");
  const unsigned ell = static_cast<unsigned>(std::bit_width(n - 1));
  double centre = 0.0;
  for (unsigned k = 1; k <= ell / 2; ++k) {
    const std::uint64_t hi = n >> (k - 1), lo = n >> k;  // odd i in (lo, hi]
    // Split the range at powers of two so every piece has a single block.
    std::uint64_t a = lo;
    while (a < hi) {
      const unsigned block = static_cast<unsigned>(std::bit_width(a + 1)) - 1;
      const std::uint64_t block_end = std::min(hi, (std::uint64_t{2} << block) - 1);
      const std::uint64_t count = odd_count_upto(block_end) - odd_count_upto(a);
      if (count != 0) centre += static_cast<double>(count) * partition_entropy(measure.parameter(block), k);
      a = block_end;
    }
  }
  return -centre + b_epsilon(eps) * std::pow(static_cast<double>(n), 1 - eps);
}

// S_n = log2 P_delta[x_1^n] + ns + c n/(log2 n)^2.
inline TrajectoryReport lower_bound_trajectory(double delta, double c, const std::vector<std::uint64_t>& n_grid,
                                               const std::vector<std::uint64_t>& seeds,
                                               std::uint64_t trend_from = kDefaultTrendFrom,
                                               double eps = kDefaultEpsilon) {
  if (!(delta >= 0)) throw std::invalid_argument("lower_bound_trajectory: delta must be nonnegative");
  if (!(c >= 0)) throw std::invalid_argument("lower_bound_trajectory: c must be nonnegative");
  if (!(eps > 0 && eps < 0.5)) throw std::invalid_argument("lower_bound_trajectory: epsilon must lie in (0,1/2)");
  const double p = golden_p(), s = golden_s();
  if (!(p + delta < 1)) throw std::invalid_argument("lower_bound_trajectory: need p + delta < 1");
  const BlockAssignment measure = BlockAssignment::harmonic(p, delta);
  const Gauge gauge = c > 0 ? Gauge::phi(s, c) : Gauge::pure(s);

  TrajectoryReport rep = density_trajectory(measure, gauge, n_grid, seeds, trend_from);
  rep.experiment = "lower";
  rep.epsilon = eps;

  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const double threshold = deviation_threshold(measure, n_grid[g], eps);
    const double gauge_part = gauge_log2(gauge, n_grid[g]);
    std::size_t hits = 0;
    for (const auto& row : rep.series)
      if (row[g] + gauge_part > threshold) ++hits;
    rep.deviation_event_frequency.push_back(static_cast<double>(hits) / static_cast<double>(seeds.size()));
  }

  // The decreasing direction needs c < tau delta / 3 (tau in bits); outside that
  // range no verdict is claimed.
  const mpq_class tau_bits_lo = tau_certify().lower_bound / ln2_enclosure().hi();
  const double limit = tau_bits_lo.get_d() * delta / 3;
  if (!(c < limit)) {
    rep.trend.forced = true;
    rep.trend.verdict = Trend::inconclusive;
    rep.trend.note = "c >= tau*delta/3 (tau certified lower bound in bits); decreasing trend not guaranteed";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Telescoping sums along dyadic scales

struct TelescopeRow {
  unsigned j = 0;
  std::uint64_t n = 0;        // 2^j
  double b = 0;               // (log2 P_mu[x_1^n] - log2 psi(2^{-n})) / n
  double partial_sum = 0;     // b_1 + ... + b_j
  double closed_form = 0;     // (s/2)(N_0(x_1^n)/n - N_0(x_1)) + gauge_sum
  double gauge_sum = 0;       // sum_{i<=j} 1/((ln 2) g(i))
};

struct TelescopeReport {
  std::string g_name;
  unsigned ell_max = 0;
  std::uint64_t seed = 0;
  std::vector<TelescopeRow> rows;
  double max_identity_gap = 0;
  bool identity_holds = false;
  double condensation_ratio = 0;  // max_{40<=m<60} c_{m+1}/c_m, c_m = 2^m / g(2^m)
  std::string divergence;         // BOUNDED or UNBOUNDED
};

inline constexpr double kTelescopeTolerance = 1e-8;

struct NamedFunction {
  std::string name;
  std::function<double(double)> f;
};

// g(t) = t, t^2 and t(1 + log2 t).
inline NamedFunction named_g(const std::string& name) {
  if (name == "t") return {name, [](double t) { return t; }};
  if (name == "t2") return {name, [](double t) { return t * t; }};
  if (name == "tlogt") return {name, [](double t) { return t * (1 + std::log2(t)); }};
  throw std::invalid_argument("named_g: unknown g '" + name + "' (options: t, t2, tlogt)");
}

namespace detail {

// Ratio test on the condensed series sum 2^m / g(2^m); a heuristic, not a proof.
inline void classify_divergence(TelescopeReport& rep, const std::function<double(double)>& g) {
  double worst = 0;
  for (int m = 40; m < 60; ++m) {
    const double log_c0 = m * std::numbers::ln2 - std::log(g(std::ldexp(1.0, m)));
    const double log_c1 = (m + 1) * std::numbers::ln2 - std::log(g(std::ldexp(1.0, m + 1)));
    worst = std::max(worst, std::exp(log_c1 - log_c0));
  }
  rep.condensation_ratio = worst;
  rep.divergence = worst < 0.95 ? "BOUNDED" : "UNBOUNDED";
}

inline TelescopeReport telescope(const std::function<double(std::uint64_t)>& log2_pmu,
                                 const std::function<std::uint64_t(std::uint64_t)>& zeros, const NamedFunction& g,
                                 unsigned ell_max) {
  const double s = golden_s();
  const Gauge psi = Gauge::psi_g(s, g.f, g.name);
  TelescopeReport rep;
  rep.g_name = g.name;
  rep.ell_max = ell_max;
  double partial = 0, gauge_sum = 0;
  const double first_zero = static_cast<double>(zeros(1));
  for (unsigned j = 1; j <= ell_max; ++j) {
    const std::uint64_t n = std::uint64_t{1} << j;
    const double nd = static_cast<double>(n);
    TelescopeRow row;
    row.j = j;
    row.n = n;
    row.b = (log2_pmu(n) - gauge_log2_unchecked(psi, nd)) / nd;
    partial += row.b;
    gauge_sum += 1.0 / (std::numbers::ln2 * g.f(static_cast<double>(j)));
    row.partial_sum = partial;
    row.gauge_sum = gauge_sum;
    row.closed_form = s / 2 * (static_cast<double>(zeros(n)) / nd - first_zero) + gauge_sum;
    rep.max_identity_gap = std::max(rep.max_identity_gap, std::abs(row.partial_sum - row.closed_form));
    rep.rows.push_back(row);
  }
  rep.identity_holds = rep.max_identity_gap <= kTelescopeTolerance;
  classify_divergence(rep, g.f);
  return rep;
}

}  // namespace detail

// Along a P_mu-sampled point.
inline TelescopeReport upper_bound_telescoping(const NamedFunction& g, unsigned ell_max, std::uint64_t seed) {
  if (ell_max < 2 || ell_max > 28) throw std::invalid_argument("upper_bound_telescoping: ell_max must lie in [2, 28]");
  const ChainSample sample(BlockAssignment::uniform(golden_p()), std::uint64_t{1} << ell_max, seed);
  if (!is_multiplicative_prefix(sample.word())) throw std::logic_error("upper_bound_telescoping: inadmissible sample");
  TelescopeReport rep = detail::telescope([&](std::uint64_t n) { return sample.log2_prob(n); },
                                          [&](std::uint64_t n) { return sample.zeros(n); }, g, ell_max);
  rep.seed = seed;
  return rep;
}

// Along a supplied admissible word of length >= 2^ell_max.
inline TelescopeReport upper_bound_telescoping(const NamedFunction& g, unsigned ell_max, const BinaryWord& x) {
  if (ell_max < 2 || ell_max > 28) throw std::invalid_argument("upper_bound_telescoping: ell_max must lie in [2, 28]");
  if (x.size() < (std::uint64_t{1} << ell_max)) throw std::invalid_argument("upper_bound_telescoping: word too short");
  if (!is_multiplicative_prefix(x)) throw std::invalid_argument("upper_bound_telescoping: word is not admissible");
  return detail::telescope([&](std::uint64_t n) { return pmu_logprob(x.prefix(n)).value(); },
                           [&](std::uint64_t n) { return static_cast<std::uint64_t>(x.count_zeros(n)); }, g, ell_max);
}

// ---------------------------------------------------------------------------
// Deviation bounds

struct DeviationCell {
  double t = 0;
  std::uint64_t n = 0;
  std::uint64_t trials = 0;
  std::uint64_t exceedances = 0;
  double frequency = 0;
  double bound = 0;
  double stderr_at_bound = 0;  // sqrt(b(1-b)/trials)
  bool within = true;          // frequency <= bound + 3 stderr
};

struct DecayFit {
  bool available = false;
  std::size_t cells = 0;
  double c2 = 0, c3 = 0;
  double c3_lo = 0, c3_hi = 0;  // 95% interval
  double r_squared = 0;
  bool c3_positive = false;
};

struct DeviationReport {
  std::string experiment;
  std::string distribution;
  double bound_constant = 0;  // C of |X| <= C, when applicable
  std::uint64_t seed = 0;
  std::vector<DeviationCell> cells;
  bool all_within = true;
  DecayFit fit;
};

inline void finish_cell(DeviationCell& cell) {
  cell.frequency = static_cast<double>(cell.exceedances) / static_cast<double>(cell.trials);
  const double b = std::clamp(cell.bound, 0.0, 1.0);
  cell.stderr_at_bound = std::sqrt(b * (1 - b) / static_cast<double>(cell.trials));
  cell.within = cell.frequency <= cell.bound + 3 * cell.stderr_at_bound;
}

// A bounded, mean-zero law; draw(stream, i) is the i-th variable of a trial.
struct BoundedDistribution {
  std::string name;
  double bound = 1;
  std::function<double(const RandomStream&, std::uint64_t)> draw;
};

inline BoundedDistribution rademacher() {
  return {"rademacher", 1.0,
          [](const RandomStream& s, std::uint64_t i) { return (s.bits_at(i) >> 63) ? 1.0 : -1.0; }};
}

// X = log2 mu(r)[u] + H(r) F_{k-1}(r) for u ~ mu(r) of length k; C is the exact max |X|.
inline BoundedDistribution centered_chain_logprob(double r, unsigned k) {
  if (k == 0 || k > 20) throw std::invalid_argument("centered_chain_logprob: k must lie in [1, 20]");
  const MarkovParams params(r);
  const double centre = partition_entropy(r, k);
  double C = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
    BinaryWord u;
    for (unsigned j = 0; j < k; ++j) u.push_back((m >> j) & 1u);
    const LogProb lp = markov_cylinder_logprob(params, u);
    if (!lp.is_zero()) C = std::max(C, std::abs(lp.value() + centre));
  }
  const double l0 = std::log2(r), l1 = std::log2(1 - r);
  auto draw = [r, k, centre, l0, l1](const RandomStream& s, std::uint64_t i) {
    double lp = 0;
    bool previous = false;
    for (unsigned j = 0; j < k; ++j) {
      const bool next = previous ? false : s.uniform_at(i * k + j) < 1 - r;
      if (!previous) lp += next ? l1 : l0;
      previous = next;
    }
    return lp + centre;
  };
  return {"chain_logprob(r=" + std::to_string(r) + ",k=" + std::to_string(k) + ")", C, draw};
}

// P(S_n >= t n) against exp(-t^2 n / (2 C^2)) on a (t, n) grid. Each trial
// draws one sequence; S_n for the grid values of n are its partial sums.
inline DeviationReport hoeffding_check(const BoundedDistribution& dist, const std::vector<double>& t_grid,
                                       const std::vector<std::uint64_t>& n_grid, std::uint64_t trials,
                                       std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("hoeffding_check: trials must be positive");
  detail::check_grid(n_grid, 1, "hoeffding_check");
  for (double t : t_grid)
    if (!(t >= 0)) throw std::invalid_argument("hoeffding_check: t must be nonnegative");
  DeviationReport rep;
  rep.experiment = "hoeffding";
  rep.distribution = dist.name;
  rep.bound_constant = dist.bound;
  rep.seed = seed;
  std::vector<std::uint64_t> exceed(t_grid.size() * n_grid.size(), 0);
  const RandomStream root(seed);
  const std::uint64_t n_max = n_grid.back();
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const RandomStream stream = root.substream(trial);
    double sum = 0;
    std::size_t g = 0;
    for (std::uint64_t i = 1; i <= n_max; ++i) {
      sum += dist.draw(stream, i - 1);
      if (i == n_grid[g]) {
        for (std::size_t a = 0; a < t_grid.size(); ++a)
          if (sum >= t_grid[a] * static_cast<double>(i)) ++exceed[a * n_grid.size() + g];
        ++g;
      }
    }
  }
  for (std::size_t a = 0; a < t_grid.size(); ++a)
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
      DeviationCell cell;
      cell.t = t_grid[a];
      cell.n = n_grid[g];
      cell.trials = trials;
      cell.exceedances = exceed[a * n_grid.size() + g];
      const double tt = cell.t;
      cell.bound = std::exp(-tt * tt * static_cast<double>(cell.n) / (2 * dist.bound * dist.bound));
      finish_cell(cell);
      rep.all_within = rep.all_within && cell.within;
      rep.cells.push_back(cell);
    }
  return rep;
}

inline DeviationReport hoeffding_check(const BoundedDistribution& dist, double t, std::uint64_t n,
                                       std::uint64_t trials, std::uint64_t seed) {
  return hoeffding_check(dist, std::vector<double>{t}, std::vector<std::uint64_t>{n}, trials, seed);
}

// Rigorous bound for P(|N_0(x_1^m) - E N_0(x_1^m)| >= a) under P_mu: chains of
// equal length k form A_k i.i.d. terms with range ceil(k/2), Hoeffding per
// group and a union bound over groups with deviation shares w_k, sum w_k <= 1.
// Returns the smaller of the shares 1/(k(k+1)) and the shares proportional to
// ceil(k/2) sqrt(A_k), and never more than 1.
inline double zero_count_tail_bound(std::uint64_t m, double a) {
  if (!(a > 0)) return 1.0;
  const auto counts = chain_length_counts(m);
  double harmonic = 0, scale = 0;
  unsigned groups = 0;
  for (unsigned k = 1; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    const double A = static_cast<double>(counts[k]);
    const double R = static_cast<double>((k + 1) / 2);
    const double w = 1.0 / (static_cast<double>(k) * (k + 1));
    harmonic += 2 * std::exp(-2 * (w * a) * (w * a) / (A * R * R));
    scale += R * std::sqrt(A);
    ++groups;
  }
  const double balanced = 2.0 * groups * std::exp(-2 * a * a / (scale * scale));
  return std::min({1.0, harmonic, balanced});
}

// |N_0*(x_1^{2n})| >= t n with N_0* centred by the exact expectation.
inline DeviationReport zero_count_deviation_check(const std::vector<double>& t_grid,
                                                  const std::vector<std::uint64_t>& n_grid, std::uint64_t trials,
                                                  std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("zero_count_deviation_check: trials must be positive");
  detail::check_grid(n_grid, 1, "zero_count_deviation_check");
  for (double t : t_grid)
    if (!(t >= 0)) throw std::invalid_argument("zero_count_deviation_check: t must be nonnegative");
  DeviationReport rep;
  rep.experiment = "ldev2";
  rep.distribution = "pmu_zero_count";
  rep.seed = seed;
  const BlockAssignment pmu = BlockAssignment::uniform(golden_p());
  std::vector<double> expected;
  for (std::uint64_t n : n_grid) expected.push_back(expected_zero_count_prefix(2 * n));
  std::vector<std::uint64_t> exceed(t_grid.size() * n_grid.size(), 0);
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const ChainSample sample(pmu, 2 * n_grid.back(), RandomStream(seed).substream(trial).key());
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
      const double dev = std::abs(static_cast<double>(sample.zeros(2 * n_grid[g])) - expected[g]);
      for (std::size_t a = 0; a < t_grid.size(); ++a)
        if (dev >= t_grid[a] * static_cast<double>(n_grid[g])) ++exceed[a * n_grid.size() + g];
    }
  }
  std::vector<double> xs, ys;
  for (std::size_t a = 0; a < t_grid.size(); ++a)
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
      DeviationCell cell;
      cell.t = t_grid[a];
      cell.n = n_grid[g];
      cell.trials = trials;
      cell.exceedances = exceed[a * n_grid.size() + g];
      cell.bound = zero_count_tail_bound(2 * cell.n, cell.t * static_cast<double>(cell.n));
      finish_cell(cell);
      rep.all_within = rep.all_within && cell.within;
      rep.cells.push_back(cell);
      if (cell.t > 0 && cell.exceedances >= 10) {
        xs.push_back(cell.t * cell.t * static_cast<double>(cell.n));
        ys.push_back(std::log(cell.frequency));
      }
    }
  // ln freq = ln c2 - c3 t^2 n.
  rep.fit.cells = xs.size();
  if (xs.size() >= 3) {
    const LinearFit f = ordinary_least_squares(xs, ys);
    rep.fit.available = true;
    rep.fit.c2 = std::exp(f.intercept);
    rep.fit.c3 = -f.slope;
    rep.fit.c3_lo = -f.slope_hi;
    rep.fit.c3_hi = -f.slope_lo;
    rep.fit.r_squared = f.r_squared;
    rep.fit.c3_positive = f.slope_hi < 0;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Uniform covers and box counting

inline double covering_sum(const Gauge& gauge, std::uint64_t n) {
  if (n < 4) throw std::domain_error("covering_sum: n must be at least 4");
  return count_cylinders_log2(n) + gauge_log2(gauge, n);
}

inline double box_dimension_estimate(std::uint64_t n) {
  if (n < 2) throw std::domain_error("box_dimension_estimate: n must be at least 2");
  return count_cylinders_log2(n) / static_cast<double>(n);
}

struct CoveringRow {
  std::uint64_t n = 0;
  double log2_count = 0;
  double box_estimate = 0;
  double log2_covering_sum = 0;
};

struct CoveringReport {
  std::string gauge;
  std::vector<CoveringRow> rows;
  double fitted_constant = 0;  // max |log2 covering sum| / (log2 n)^2
};

inline CoveringReport covering_series(const Gauge& gauge, const std::vector<std::uint64_t>& n_grid) {
  detail::check_grid(n_grid, 4, "covering_series");
  CoveringReport rep;
  rep.gauge = gauge.describe();
  for (std::uint64_t n : n_grid) {
    CoveringRow r;
    r.n = n;
    r.log2_count = count_cylinders_log2(n);
    r.box_estimate = r.log2_count / static_cast<double>(n);
    r.log2_covering_sum = r.log2_count + gauge_log2(gauge, n);
    const double L = std::log2(static_cast<double>(n));
    rep.fitted_constant = std::max(rep.fitted_constant, std::abs(r.log2_covering_sum) / (L * L));
    rep.rows.push_back(r);
  }
  return rep;
}

}  // namespace mgs
