#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <map>
#include <numbers>

#include "mgs/experiments.hpp"
#include "oracles.hpp"

using mgs::BlockAssignment;
using mgs::Gauge;
using mgs::Trend;

namespace {

double s() { return mgs::golden_s(); }
double p() { return mgs::golden_p(); }

}  // namespace

TEST(Grids, DyadicAndSeeds) {
  EXPECT_EQ(mgs::dyadic_grid(4, 6), (std::vector<std::uint64_t>{16, 32, 64}));
  EXPECT_EQ(mgs::seed_list(10, 3), (std::vector<std::uint64_t>{10, 11, 12}));
  EXPECT_THROW(mgs::dyadic_grid(5, 4), std::invalid_argument);
}

TEST(DensityTrajectory, SeriesMatchDirectComputation) {
  const auto assign = BlockAssignment::harmonic(p(), 0.05);
  const Gauge gauge = Gauge::psi_theta(s(), 1.0);
  const std::vector<std::uint64_t> grid{4, 6, 64, 100, 1024};
  const auto rep = mgs::density_trajectory(assign, gauge, grid, mgs::seed_list(3, 5), 64);
  ASSERT_EQ(rep.series.size(), 5u);
  for (std::size_t j = 0; j < rep.seeds.size(); ++j) {
    const auto word = mgs::sample_point(assign, grid.back(), rep.seeds[j]).word;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double n = static_cast<double>(grid[g]);
      const double lp = mgs::pdelta_logprob(assign, word.prefix(grid[g])).value();
      const double expected = lp + n * s() + n / std::log2(n);
      ASSERT_NEAR(rep.series[j][g], expected, 1e-9 * std::abs(expected) + 1e-9);
    }
  }
  EXPECT_TRUE(rep.all_admissible);
  EXPECT_TRUE(rep.zero_count_decomposition_holds);
  EXPECT_FALSE(rep.max_pmu_identity_gap.has_value());
  EXPECT_EQ(rep.summary.size(), grid.size());
}

TEST(DensityTrajectory, PmuIdentityAtEveryEvenGridPoint) {
  const auto grid = mgs::dyadic_grid(2, 14);
  const auto rep = mgs::density_trajectory(BlockAssignment::uniform(p()), Gauge::pure(s()), grid,
                                           mgs::seed_list(1, 20));
  ASSERT_TRUE(rep.max_pmu_identity_gap.has_value());
  EXPECT_LE(*rep.max_pmu_identity_gap, 1e-8);
  for (std::size_t j = 0; j < rep.seeds.size(); ++j) {
    const auto word = mgs::sample_point(BlockAssignment::uniform(p()), grid.back(), rep.seeds[j]).word;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const std::uint64_t n = grid[g];
      const double rhs = s() * (static_cast<double>(word.count_zeros(n)) / 2 - static_cast<double>(word.count_zeros(n / 2)));
      ASSERT_NEAR(rep.series[j][g], rhs, 1e-8);
    }
  }
}

TEST(DensityTrajectory, SeedRowsAreIndependentOfTheOtherSeeds) {
  const auto assign = BlockAssignment::uniform(p());
  const auto grid = mgs::dyadic_grid(4, 12);
  const auto all = mgs::density_trajectory(assign, Gauge::pure(s()), grid, mgs::seed_list(100, 6));
  const auto one = mgs::density_trajectory(assign, Gauge::pure(s()), grid, {103});
  EXPECT_EQ(all.series[3], one.series[0]);
  const auto again = mgs::density_trajectory(assign, Gauge::pure(s()), grid, mgs::seed_list(100, 6));
  EXPECT_EQ(all.series, again.series);
}

TEST(DensityTrajectory, SummaryMatchesColumnStatistics) {
  const auto rep = mgs::density_trajectory(BlockAssignment::uniform(p()), Gauge::pure(s()), mgs::dyadic_grid(4, 8),
                                           mgs::seed_list(5, 9));
  for (std::size_t g = 0; g < rep.n_grid.size(); ++g) {
    std::vector<double> col;
    for (const auto& row : rep.series) col.push_back(row[g]);
    std::sort(col.begin(), col.end());
    EXPECT_DOUBLE_EQ(rep.summary[g].median, col[4]);
    EXPECT_DOUBLE_EQ(rep.summary[g].min, col.front());
    EXPECT_DOUBLE_EQ(rep.summary[g].max, col.back());
    EXPECT_DOUBLE_EQ(rep.summary[g].q1, col[2]);
    EXPECT_DOUBLE_EQ(rep.summary[g].q3, col[6]);
  }
}

TEST(DensityTrajectory, PsiOneDriftsUpward) {
  const auto rep = mgs::density_trajectory(BlockAssignment::uniform(p()), Gauge::psi_theta(s(), 1.0),
                                           mgs::dyadic_grid(4, 16), mgs::seed_list(1, 100));
  EXPECT_EQ(rep.trend.verdict, Trend::increasing);
  EXPECT_EQ(rep.trend.points, 5u);
}

TEST(DensityTrajectory, Validation) {
  const auto assign = BlockAssignment::uniform(p());
  EXPECT_THROW(mgs::density_trajectory(assign, Gauge::pure(s()), {2, 8}, {1}), std::invalid_argument);
  EXPECT_THROW(mgs::density_trajectory(assign, Gauge::pure(s()), {16, 8}, {1}), std::invalid_argument);
  EXPECT_THROW(mgs::density_trajectory(assign, Gauge::pure(s()), {16}, {}), std::invalid_argument);
}

TEST(LowerBoundTrajectory, ZeroPerturbationReducesToPmuIdentity) {
  const auto grid = mgs::dyadic_grid(2, 12);
  const auto rep = mgs::lower_bound_trajectory(0.0, 0.0, grid, mgs::seed_list(9, 10));
  ASSERT_TRUE(rep.max_pmu_identity_gap.has_value());
  EXPECT_LE(*rep.max_pmu_identity_gap, 1e-8);
  EXPECT_EQ(rep.experiment, "lower");
}

TEST(LowerBoundTrajectory, SeriesIsPdeltaPlusGaugeCorrection) {
  const std::vector<std::uint64_t> grid{16, 256, 4096};
  const auto rep = mgs::lower_bound_trajectory(0.05, 0.002, grid, {77});
  const auto word = mgs::sample_point(BlockAssignment::harmonic(p(), 0.05), 4096, 77).word;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double n = static_cast<double>(grid[g]), L = std::log2(n);
    const double expected =
        mgs::pdelta_logprob(BlockAssignment::harmonic(p(), 0.05), word.prefix(grid[g])).value() + n * s() +
        0.002 * n / (L * L);
    EXPECT_NEAR(rep.series[0][g], expected, 1e-9 * std::abs(expected) + 1e-9);
  }
}

TEST(LowerBoundTrajectory, LargeCIsForcedInconclusive) {
  // c = tau * delta with tau ~ 0.187 (nats) exceeds the tau delta / 3 range.
  const auto rep = mgs::lower_bound_trajectory(0.05, 0.187 * 0.05, mgs::dyadic_grid(4, 12), mgs::seed_list(1, 10));
  EXPECT_TRUE(rep.trend.forced);
  EXPECT_EQ(rep.trend.verdict, Trend::inconclusive);
  EXPECT_FALSE(rep.trend.note.empty());
  const auto ok = mgs::lower_bound_trajectory(0.05, 0.002, mgs::dyadic_grid(4, 12), mgs::seed_list(1, 10));
  EXPECT_FALSE(ok.trend.forced);
}

TEST(LowerBoundTrajectory, Validation) {
  const auto grid = mgs::dyadic_grid(4, 8);
  EXPECT_THROW(mgs::lower_bound_trajectory(-0.1, 0.002, grid, {1}), std::invalid_argument);
  EXPECT_THROW(mgs::lower_bound_trajectory(0.5, 0.002, grid, {1}), std::invalid_argument);
  EXPECT_THROW(mgs::lower_bound_trajectory(0.05, -1.0, grid, {1}), std::invalid_argument);
  EXPECT_THROW(mgs::lower_bound_trajectory(0.05, 0.002, grid, {1}, 4096, 0.5), std::invalid_argument);
}

TEST(DeviationEvent, BEpsilonIsTheGeometricSum) {
  for (double eps : {0.1, 0.25, 0.4}) {
    double sum = 0;
    for (int k = 1; k < 2000; ++k) sum += std::exp2(-(k + 1) * eps);
    EXPECT_NEAR(mgs::b_epsilon(eps), sum, 1e-9);
  }
}

TEST(DeviationEvent, ThresholdMatchesChainByChainSum) {
  const auto assign = BlockAssignment::harmonic(p(), 0.05);
  for (std::uint64_t n : {2ull, 3ull, 7ull, 16ull, 100ull, 1000ull, 4096ull, 5000ull}) {
    const unsigned ell = static_cast<unsigned>(std::bit_width(n - 1));
    double centre = 0;
    for (std::uint64_t i = 1; i <= n; i += 2) {
      const unsigned k = mgs::chain_length(n, mgs::ChainIndex(i));
      if (k > ell / 2) continue;
      centre += mgs::partition_entropy(assign.parameter(static_cast<unsigned>(std::bit_width(i)) - 1), k);
    }
    const double expected = -centre + mgs::b_epsilon(0.25) * std::pow(static_cast<double>(n), 0.75);
    EXPECT_NEAR(mgs::deviation_threshold(assign, n, 0.25), expected, 1e-9 * std::abs(expected)) << n;
  }
}

TEST(DeviationEvent, FrequenciesAreProbabilities) {
  const auto rep = mgs::lower_bound_trajectory(0.05, 0.002, mgs::dyadic_grid(4, 14), mgs::seed_list(1, 50));
  ASSERT_EQ(rep.deviation_event_frequency.size(), rep.n_grid.size());
  for (double f : rep.deviation_event_frequency) {
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
  EXPECT_EQ(rep.epsilon, 0.25);
}

TEST(Telescoping, IdentityHoldsAlongSampledPoints) {
  for (const char* name : {"t", "t2", "tlogt"})
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      const auto rep = mgs::upper_bound_telescoping(mgs::named_g(name), 16, seed);
      EXPECT_TRUE(rep.identity_holds) << name << ' ' << rep.max_identity_gap;
      EXPECT_LE(rep.max_identity_gap, mgs::kTelescopeTolerance);
      EXPECT_EQ(rep.rows.size(), 16u);
    }
}

TEST(Telescoping, TermsMatchDirectFormula) {
  const auto g = mgs::named_g("t");
  const auto word = mgs::sample_point(BlockAssignment::uniform(p()), 1024, 5).word;
  const auto rep = mgs::upper_bound_telescoping(g, 10, word);
  for (const auto& row : rep.rows) {
    const double n = static_cast<double>(row.n);
    const double lp = mgs::pmu_logprob(word.prefix(row.n)).value();
    const double b = (lp + n * s() + n / (std::numbers::ln2 * row.j)) / n;
    EXPECT_NEAR(row.b, b, 1e-12);
  }
  const auto sampled = mgs::upper_bound_telescoping(g, 10, 5);
  for (std::size_t j = 0; j < rep.rows.size(); ++j) EXPECT_NEAR(sampled.rows[j].b, rep.rows[j].b, 1e-12);
}

TEST(Telescoping, DivergenceClassification) {
  const auto t = mgs::upper_bound_telescoping(mgs::named_g("t"), 12, 1);
  const auto t2 = mgs::upper_bound_telescoping(mgs::named_g("t2"), 12, 1);
  const auto tlogt = mgs::upper_bound_telescoping(mgs::named_g("tlogt"), 12, 1);
  EXPECT_EQ(t.divergence, "UNBOUNDED");
  EXPECT_EQ(t2.divergence, "BOUNDED");
  EXPECT_EQ(tlogt.divergence, "UNBOUNDED");
  // sum_{j<=12} 1/((ln 2) j)
  double h = 0;
  for (int j = 1; j <= 12; ++j) h += 1.0 / j;
  EXPECT_NEAR(t.rows.back().gauge_sum, h / std::numbers::ln2, 1e-12);
}

TEST(Telescoping, Validation) {
  EXPECT_THROW(mgs::named_g("sqrt"), std::invalid_argument);
  EXPECT_THROW(mgs::upper_bound_telescoping(mgs::named_g("t"), 1, 1ull), std::invalid_argument);
  EXPECT_THROW(mgs::upper_bound_telescoping(mgs::named_g("t"), 4, mgs::BinaryWord("0000")), std::invalid_argument);
  EXPECT_THROW(mgs::upper_bound_telescoping(mgs::named_g("t"), 2, mgs::BinaryWord("0101")), std::invalid_argument);
}

TEST(Hoeffding, RademacherExample) {
  const auto rep = mgs::hoeffding_check(mgs::rademacher(), 0.5, 100, 100000, 1);
  ASSERT_EQ(rep.cells.size(), 1u);
  EXPECT_NEAR(rep.cells[0].bound, std::exp(-12.5), 1e-15);
  EXPECT_EQ(rep.cells[0].exceedances, 0u);
  EXPECT_TRUE(rep.all_within);
}

TEST(Hoeffding, ZeroLevelHasBoundOne) {
  const auto rep = mgs::hoeffding_check(mgs::rademacher(), 0.0, 10, 1000, 2);
  EXPECT_EQ(rep.cells[0].bound, 1.0);
  EXPECT_TRUE(rep.cells[0].within);
}

TEST(Hoeffding, GridCellsEqualSingleCellRuns) {
  const std::vector<double> t{0.1, 0.3};
  const std::vector<std::uint64_t> n{10, 40};
  const auto grid = mgs::hoeffding_check(mgs::rademacher(), t, n, 5000, 3);
  for (const auto& cell : grid.cells) {
    const auto single = mgs::hoeffding_check(mgs::rademacher(), cell.t, cell.n, 5000, 3);
    EXPECT_EQ(single.cells[0].exceedances, cell.exceedances);
  }
}

TEST(Hoeffding, RademacherFrequencyMatchesBinomialTail) {
  // P(S_10 >= 2) = P(Bin(10,1/2) >= 6) = 386/1024.
  const auto rep = mgs::hoeffding_check(mgs::rademacher(), 0.2, 10, 100000, 4);
  const double exact = 386.0 / 1024.0;
  EXPECT_NEAR(rep.cells[0].frequency, exact, 4 * std::sqrt(exact * (1 - exact) / 100000));
}

TEST(Hoeffding, ChainLogProbabilityConstantAndCentring) {
  for (double r : {0.3, p()})
    for (unsigned k : {1u, 3u, 6u}) {
      const auto dist = mgs::centered_chain_logprob(r, k);
      double C = 0, mean = 0;
      for (const auto& u : oracle::all_words(k)) {
        if (!oracle::golden(u)) continue;
        const double prob = oracle::markov_prob(r, u);
        const double x = std::log2(prob) + mgs::partition_entropy(r, k);
        C = std::max(C, std::abs(x));
        mean += prob * x;
      }
      EXPECT_NEAR(dist.bound, C, 1e-12);
      EXPECT_NEAR(mean, 0.0, 1e-12);
    }
}

TEST(Hoeffding, ChainLogProbabilityDrawsFollowTheChainLaw) {
  const double r = p();
  const unsigned k = 3;
  const auto dist = mgs::centered_chain_logprob(r, k);
  std::map<long long, double> law;
  for (const auto& u : oracle::all_words(k))
    if (oracle::golden(u)) law[std::llround(1e9 * (std::log2(oracle::markov_prob(r, u)) + mgs::partition_entropy(r, k)))] +=
        oracle::markov_prob(r, u);
  std::map<long long, double> seen;
  const mgs::RandomStream stream(11);
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) seen[std::llround(1e9 * dist.draw(stream, i))] += 1.0 / draws;
  for (const auto& [value, prob] : law) EXPECT_NEAR(seen[value], prob, 4 * std::sqrt(prob * (1 - prob) / draws));
  for (const auto& [value, freq] : seen) EXPECT_TRUE(law.count(value)) << value;
}

TEST(Hoeffding, ChainLogProbabilityRespectsBound) {
  const auto rep = mgs::hoeffding_check(mgs::centered_chain_logprob(p(), 4), {0.0, 0.5, 1.0, 2.0}, {10, 100}, 20000, 5);
  EXPECT_TRUE(rep.all_within);
  for (const auto& c : rep.cells) {
    EXPECT_GE(c.frequency, 0.0);
    EXPECT_LE(c.frequency, 1.0);
  }
}

TEST(ZeroCountBound, ConservativeAgainstExactLaw) {
  // Exact law of N_0(x_1^m) under P_mu by enumeration.
  for (std::uint64_t m : {4ull, 8ull, 13ull, 16ull}) {
    std::map<unsigned, double> law;
    for (const auto& u : oracle::all_words(m)) {
      if (!oracle::multiplicative(u)) continue;
      law[oracle::zeros(u)] += oracle::product_prob([](std::uint64_t) { return mgs::golden_p(); }, u);
    }
    const double e = mgs::expected_zero_count_prefix(m);
    for (double a : {0.5, 1.0, 2.0, 3.0, 4.0, 6.0}) {
      double tail = 0;
      for (const auto& [z, prob] : law)
        if (std::abs(z - e) >= a) tail += prob;
      EXPECT_LE(tail, mgs::zero_count_tail_bound(m, a) + 1e-12) << m << ' ' << a;
    }
  }
}

TEST(ZeroCountBound, BasicShape) {
  EXPECT_EQ(mgs::zero_count_tail_bound(64, 0.0), 1.0);
  double previous = 1.0;
  for (double a = 1; a < 200; a += 5) {
    const double b = mgs::zero_count_tail_bound(1024, a);
    EXPECT_LE(b, previous);
    EXPECT_GE(b, 0.0);
    previous = b;
  }
  EXPECT_LT(mgs::zero_count_tail_bound(2048, 1.5 * 1024), 1e-6);
}

TEST(ZeroCountDeviation, ShapeAndBounds) {
  const auto rep = mgs::zero_count_deviation_check(mgs::kLdevTGrid, mgs::kLdevNGrid, 20000, 1);
  EXPECT_TRUE(rep.all_within);
  for (const auto& c : rep.cells) {
    EXPECT_GE(c.frequency, 0.0);
    EXPECT_LE(c.frequency, 1.0);
    EXPECT_EQ(c.trials, 20000u);
    if (c.t == 0.0) {
      EXPECT_EQ(c.frequency, 1.0);
    }
    if (c.bound < 1e-6) {
      EXPECT_EQ(c.exceedances, 0u);
    }
  }
  ASSERT_TRUE(rep.fit.available);
  EXPECT_TRUE(rep.fit.c3_positive);
  EXPECT_GT(rep.fit.c3_lo, 0.0);
}

TEST(ZeroCountDeviation, CentringIsUnbiased) {
  // Mean of N_0(x_1^{2n}) over trials is the exact expectation.
  const std::uint64_t n = 256, trials = 4000;
  double sum = 0, sq = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const mgs::ChainSample sample(BlockAssignment::uniform(p()), 2 * n, mgs::RandomStream(8).substream(t).key());
    const double z = static_cast<double>(sample.zeros(2 * n));
    sum += z;
    sq += z * z;
  }
  const double mean = sum / trials, var = sq / trials - mean * mean;
  EXPECT_NEAR(mean, mgs::expected_zero_count_prefix(2 * n), 4 * std::sqrt(var / trials));
}

TEST(Covering, BoxDimensionExamples) {
  EXPECT_NEAR(mgs::box_dimension_estimate(3), std::log2(6.0) / 3, 1e-15);
  EXPECT_NEAR(mgs::box_dimension_estimate(1 << 16), 0.82429, 5e-3);
  EXPECT_THROW(mgs::box_dimension_estimate(1), std::domain_error);
}

TEST(Covering, BoxDimensionTrendTowardLimit) {
  const double dim_m = mgs::dim_minkowski(1e-15).value;
  double previous = std::abs(mgs::box_dimension_estimate(16) - dim_m);
  for (unsigned e = 5; e <= 20; ++e) {
    const double gap = std::abs(mgs::box_dimension_estimate(std::uint64_t{1} << e) - dim_m);
    EXPECT_LE(gap, previous + 1e-15) << e;
    previous = gap;
  }
  // Off the dyadic grid the boundary chains give an O(log n / n) error.
  for (std::uint64_t n : {100ull, 1000ull, 10000ull, 100000ull, 1000000ull})
    EXPECT_LE(std::abs(mgs::box_dimension_estimate(n) - dim_m), 2 * std::log2(static_cast<double>(n)) / n) << n;
}

TEST(Covering, LogCountMatchesExactCount) {
  for (std::uint64_t n : {1ull, 5ull, 17ull, 64ull, 333ull})
    EXPECT_NEAR(mgs::count_cylinders_log2(n), mgs::count_cylinders(n).log2, 1e-9);
}

TEST(Covering, SumAtDimMStaysNearZero) {
  const double dim_m = mgs::dim_minkowski(1e-15).value;
  std::vector<std::uint64_t> grid;
  for (std::uint64_t n = 4; n <= (1u << 20); n = n * 3 / 2 + 1) grid.push_back(n);
  const auto rep = mgs::covering_series(Gauge::pure(dim_m), grid);
  for (const auto& row : rep.rows) {
    const double L = std::log2(static_cast<double>(row.n));
    EXPECT_LE(std::abs(row.log2_covering_sum), rep.fitted_constant * L * L + 1e-9);
  }
  EXPECT_LT(rep.fitted_constant, 1.0);
}

TEST(Covering, HausdorffExponentGrowsAndPsiOneFalls) {
  const double dim_m = mgs::dim_minkowski(1e-15).value;
  double previous_s = -1e300, previous_psi = 1e300;
  for (unsigned e = 6; e <= 20; ++e) {
    const std::uint64_t n = std::uint64_t{1} << e;
    const double at_s = mgs::covering_sum(Gauge::pure(s()), n);
    const double at_psi = mgs::covering_sum(Gauge::psi_theta(dim_m, 1.0), n);
    EXPECT_NEAR(at_s / static_cast<double>(n), dim_m - s(), 1e-3);
    EXPECT_GT(at_s, previous_s);
    EXPECT_LT(at_psi, previous_psi);
    previous_s = at_s;
    previous_psi = at_psi;
  }
  EXPECT_THROW(mgs::covering_sum(Gauge::pure(s()), 3), std::domain_error);
}
