#include <gtest/gtest.h>

#include "mgs/fibonacci.hpp"
#include "oracles.hpp"

TEST(Fibonacci, TableRecurrence) {
  mgs::FibonacciTable table;
  EXPECT_EQ(table(1), 1);
  EXPECT_EQ(table(2), 2);
  for (unsigned k = 2; k < 90; ++k) ASSERT_EQ(table(k + 1), table(k - 1) + table(k));
  EXPECT_THROW(table(0), std::domain_error);
}

TEST(CountGoldenWords, Examples) {
  EXPECT_EQ(mgs::count_golden_words(1), 2);
  EXPECT_EQ(mgs::count_golden_words(2), 3);
  EXPECT_EQ(mgs::count_golden_words(3), 5);
}

TEST(CountGoldenWords, MatchesEnumeration) {
  for (unsigned k = 1; k <= 20; ++k) {
    unsigned long count = 0;
    for (const auto& s : oracle::all_words(k)) count += oracle::golden(s);
    ASSERT_EQ(mgs::count_golden_words(k), count) << k;
  }
}

TEST(CountCylinders, Examples) {
  EXPECT_EQ(mgs::count_cylinders(1).exact, 2);
  EXPECT_EQ(mgs::count_cylinders(3).exact, 6);
  EXPECT_EQ(mgs::count_cylinders(4).exact, 10);
}

TEST(CountCylinders, MatchesEnumeration) {
  for (unsigned n = 1; n <= 20; ++n) {
    unsigned long count = 0;
    for (const auto& s : oracle::all_words(n)) count += oracle::multiplicative(s);
    const auto c = mgs::count_cylinders(n);
    ASSERT_EQ(c.exact, count) << n;
    ASSERT_NEAR(c.log2, std::log2(static_cast<double>(count)), 1e-12);
  }
}

TEST(CountCylinders, LargeNeedsBigIntegers) {
  const auto c = mgs::count_cylinders(std::uint64_t{1} << 20);
  EXPECT_GT(mpz_sizeinbase(c.exact.get_mpz_t(), 2), 64u);
  EXPECT_NEAR(c.log2, mgs::log2_of(c.exact), 1e-6 * c.log2);
}
