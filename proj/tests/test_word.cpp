#include <gtest/gtest.h>

#include <random>

#include "mgs/word.hpp"
#include "oracles.hpp"

using mgs::BinaryWord;
using mgs::ChainIndex;

TEST(BinaryWord, OneBasedIndexing) {
  const BinaryWord w("0110");
  EXPECT_EQ(w.size(), 4u);
  EXPECT_FALSE(w[1]);
  EXPECT_TRUE(w[2]);
  EXPECT_TRUE(w[3]);
  EXPECT_FALSE(w[4]);
  EXPECT_THROW((void)w.at(0), std::out_of_range);
  EXPECT_THROW((void)w.at(5), std::out_of_range);
  EXPECT_EQ(w.to_string(), "0110");
}

TEST(BinaryWord, RejectsOtherSymbols) { EXPECT_THROW(BinaryWord("0120"), std::invalid_argument); }

TEST(BinaryWord, CountsAndPrefixAcrossBlockBoundary) {
  std::string s;
  for (int j = 0; j < 150; ++j) s.push_back(j % 3 == 0 ? '1' : '0');
  const BinaryWord w(s);
  EXPECT_EQ(w.count_ones(), 50u);
  EXPECT_EQ(w.count_zeros(), 100u);
  EXPECT_EQ(w.count_ones(64), 22u);
  EXPECT_EQ(w.prefix(70).to_string(), s.substr(0, 70));
  EXPECT_EQ(w.prefix(70), BinaryWord(s.substr(0, 70)));
}

TEST(GoldenWord, Examples) {
  EXPECT_TRUE(mgs::is_golden_word(BinaryWord("101")));
  EXPECT_FALSE(mgs::is_golden_word(BinaryWord("110")));
  EXPECT_TRUE(mgs::is_golden_word(BinaryWord("")));
}

TEST(MultiplicativePrefix, Examples) {
  EXPECT_FALSE(mgs::is_multiplicative_prefix(BinaryWord("110")));
  EXPECT_TRUE(mgs::is_multiplicative_prefix(BinaryWord("101")));
  EXPECT_FALSE(mgs::is_multiplicative_prefix(BinaryWord("0111")));
}

TEST(MultiplicativePrefix, MatchesBruteForceAndChainCriterion) {
  for (unsigned n = 0; n <= 12; ++n) {
    for (const auto& s : oracle::all_words(n)) {
      const BinaryWord u(s);
      const bool expected = oracle::multiplicative(s);
      ASSERT_EQ(mgs::is_multiplicative_prefix(u), expected) << s;
      bool chains_golden = true;
      for (std::uint64_t i = 1; i <= n; i += 2)
        chains_golden = chains_golden && mgs::is_golden_word(mgs::restrict_to_chain(u, ChainIndex(i)));
      ASSERT_EQ(chains_golden, expected) << s;
      ASSERT_EQ(mgs::is_golden_word(u), oracle::golden(s)) << s;
    }
  }
}

TEST(ChainIndex, OddOnlyAndBlock) {
  EXPECT_THROW(ChainIndex(0), std::invalid_argument);
  EXPECT_THROW(ChainIndex(4), std::invalid_argument);
  EXPECT_EQ(ChainIndex(1).block(), 0u);
  EXPECT_EQ(ChainIndex(3).block(), 1u);
  EXPECT_EQ(ChainIndex(7).block(), 2u);
  EXPECT_EQ(ChainIndex(9).block(), 3u);
  for (std::uint64_t i = 1; i < 5000; i += 2) {
    const unsigned b = ChainIndex(i).block();
    ASSERT_LE(std::uint64_t{1} << b, i);
    ASSERT_LT(i, std::uint64_t{2} << b);
  }
}

TEST(RestrictToChain, Examples) {
  EXPECT_EQ(mgs::restrict_to_chain(BinaryWord("010010"), ChainIndex(3)).to_string(), "00");
  EXPECT_EQ(mgs::restrict_to_chain(BinaryWord("011010"), ChainIndex(3)).to_string(), "10");
  EXPECT_EQ(mgs::restrict_to_chain(BinaryWord("0100"), ChainIndex(1)).to_string(), "010");
  EXPECT_EQ(mgs::restrict_to_chain(BinaryWord("0000001"), ChainIndex(7)).to_string(), "1");
  EXPECT_THROW(mgs::restrict_to_chain(BinaryWord("01"), ChainIndex(3)), std::out_of_range);
}

TEST(ChainLength, Examples) {
  EXPECT_EQ(mgs::chain_length(6, ChainIndex(3)), 2u);
  EXPECT_EQ(mgs::chain_length(6, ChainIndex(5)), 1u);
  EXPECT_EQ(mgs::chain_length(8, ChainIndex(1)), 4u);
  EXPECT_THROW(mgs::chain_length(4, ChainIndex(5)), std::domain_error);
}

TEST(ChainLength, MatchesDefiningInequality) {
  for (std::uint64_t n = 1; n <= 600; ++n)
    for (std::uint64_t i = 1; i <= n; i += 2) {
      const std::uint64_t k = mgs::chain_length(n, ChainIndex(i));
      ASSERT_LE((std::uint64_t{1} << (k - 1)) * i, n);
      ASSERT_LT(n, (std::uint64_t{1} << k) * i);
    }
}

TEST(OddIndices, Examples) {
  auto values = [](const mpq_class& a, const mpq_class& b) {
    std::vector<std::uint64_t> v;
    for (auto c : mgs::odd_indices_in(a, b)) v.push_back(c.value());
    return v;
  };
  EXPECT_EQ(values(mpq_class(3, 2), 3), std::vector<std::uint64_t>{3});
  EXPECT_EQ(values(3, 6), std::vector<std::uint64_t>{5});
  EXPECT_EQ(values(mpq_class(3, 4), mpq_class(3, 2)), std::vector<std::uint64_t>{1});
  EXPECT_THROW(mgs::odd_indices_in(2, 1), std::domain_error);
}

TEST(OddIndices, CardinalityWithinOneOfHalfLength) {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long> num(0, 20000), den(1, 97);
  for (int trial = 0; trial < 1000; ++trial) {
    mpq_class a(num(rng), den(rng)), b(num(rng), den(rng));
    a.canonicalize();
    b.canonicalize();
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    const auto list = mgs::odd_indices_in(a, b);
    std::uint64_t brute = 0;
    for (long i = 1; i <= 20000; i += 2)
      if (a < i && i <= b) ++brute;
    ASSERT_EQ(list.size(), brute);
    ASSERT_EQ(mgs::count_odd_in(a, b), brute);
    const mpq_class gap = mpq_class(static_cast<unsigned long>(list.size())) - (b - a) / 2;
    ASSERT_LE(abs(gap), 1);
  }
}

TEST(ChainPartition, Examples) {
  using M = std::map<ChainIndex, unsigned>;
  EXPECT_EQ(mgs::chain_partition(3), (M{{ChainIndex(1), 2}, {ChainIndex(3), 1}}));
  EXPECT_EQ(mgs::chain_partition(6), (M{{ChainIndex(1), 3}, {ChainIndex(3), 2}, {ChainIndex(5), 1}}));
  EXPECT_EQ(mgs::chain_partition(1), (M{{ChainIndex(1), 1}}));
}

TEST(ChainPartition, LengthsSumToN) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> pick(1, 1000000);
  std::vector<std::uint64_t> ns{1, 2, 3, 1023, 1024, 1025, 1000000};
  for (int j = 0; j < 40; ++j) ns.push_back(pick(rng));
  for (auto n : ns) {
    std::uint64_t total = 0;
    for (std::uint64_t i = 1; i <= n; i += 2) total += mgs::chain_length(n, ChainIndex(i));
    ASSERT_EQ(total, n) << n;
    const auto counts = mgs::chain_length_counts(n);
    std::uint64_t from_counts = 0, chains = 0;
    for (std::size_t k = 1; k < counts.size(); ++k) {
      from_counts += k * counts[k];
      chains += counts[k];
    }
    ASSERT_EQ(from_counts, n);
    ASSERT_EQ(chains, (n + 1) / 2);
  }
}

TEST(Interleave, ReconstructsWord) {
  std::mt19937_64 rng(99);
  for (unsigned n : {1u, 2u, 7u, 64u, 65u, 300u}) {
    for (int rep = 0; rep < 20; ++rep) {
      std::string s(n, '0');
      for (auto& c : s) c = (rng() & 1u) ? '1' : '0';
      const BinaryWord u(s);
      std::vector<BinaryWord> chains;
      for (std::uint64_t i = 1; i <= n; i += 2) chains.push_back(mgs::restrict_to_chain(u, ChainIndex(i)));
      ASSERT_EQ(mgs::interleave_chains(chains, n), u);
    }
  }
}
