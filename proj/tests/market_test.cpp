#include <gtest/gtest.h>

#include <cmath>

#include "hintmatch/market.hpp"

namespace hm = hintmatch;

TEST(Market, SortByMeansOrdersDescending) {
  const std::vector<double> row{0.2, 0.9, 0.5};
  EXPECT_EQ(hm::sort_by_means(row), (hm::PrefList{1, 2, 0}));
  const std::vector<double> two{0.9, 0.5};
  EXPECT_EQ(hm::sort_by_means(two), (hm::PrefList{0, 1}));
}

TEST(Market, DuplicateMeansRejected) {
  EXPECT_THROW(hm::Market(1, 2, {0.5, 0.5}, {0.3, 0.4}), hm::InputError);
  const std::vector<double> dup{0.3, 0.3};
  EXPECT_THROW(hm::sort_by_means(dup), hm::InputError);
}

TEST(Market, ShapeAndRangeValidated) {
  EXPECT_THROW(hm::Market(2, 1, {0.1, 0.2}, {0.1, 0.2}), hm::InputError);
  EXPECT_THROW(hm::Market(1, 2, {0.1, 1.2}, {0.3, 0.4}), hm::InputError);
  EXPECT_THROW(hm::Market(1, 2, {0.1}, {0.3, 0.4}), hm::InputError);
  EXPECT_NO_THROW(hm::Market(1, 1, {0.0}, {1.0}));
}

TEST(Market, GroundTruthOfIdenticalFirmRows) {
  // Three firms with the same ranking over agents.
  hm::Market market(3, 3, {0.9, 0.5, 0.1, 0.5, 0.9, 0.1, 0.9, 0.1, 0.5},
                     {0.9, 0.5, 0.1, 0.9, 0.5, 0.1, 0.9, 0.5, 0.1});
  const auto truth = hm::ground_truth_prefs(market);
  for (const auto& list : truth.firms) EXPECT_EQ(list, (hm::PrefList{0, 1, 2}));
  EXPECT_EQ(truth.agents[1], (hm::PrefList{1, 0, 2}));
}

TEST(Market, PermutationCheck) {
  const std::vector<int> ok{2, 0, 1};
  const std::vector<int> dup{0, 0, 1};
  const std::vector<int> shortlist{0, 1};
  EXPECT_NO_THROW(hm::require_permutation(ok, 3, "list"));
  EXPECT_THROW(hm::require_permutation(dup, 3, "list"), hm::InputError);
  EXPECT_THROW(hm::require_permutation(shortlist, 3, "list"), hm::InputError);
  EXPECT_EQ(hm::rank_of(ok), (std::vector<int>{1, 2, 0}));
}

TEST(Matching, InjectivityAndViews) {
  EXPECT_THROW(hm::Matching({0, 0}, 2), hm::InputError);
  EXPECT_THROW(hm::Matching({0, 3}, 2), hm::InputError);
  hm::Matching mu({1, hm::kUnmatched}, 3);
  EXPECT_FALSE(mu.perfect());
  EXPECT_EQ(mu.firm_view(), (std::vector<int>{hm::kUnmatched, 0, hm::kUnmatched}));
}

TEST(Reward, DegenerateBernoulli) {
  hm::Rng rng(3);
  const hm::RewardModel model{};
  for (int k = 0; k < 100; ++k) {
    EXPECT_EQ(hm::draw(model, 1.0, rng), 1.0);
    EXPECT_EQ(hm::draw(model, 0.0, rng), 0.0);
  }
}

TEST(Reward, BernoulliSampleMean) {
  hm::Rng rng(11);
  const hm::RewardModel model{};
  double sum = 0.0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) sum += hm::draw(model, 0.6, rng);
  EXPECT_NEAR(sum / draws, 0.6, 0.01);
}

TEST(Reward, PointMassIsExact) {
  hm::Rng rng(5);
  const hm::RewardModel model{hm::RewardKind::point, 0.1};
  EXPECT_EQ(hm::draw(model, 0.7, rng), 0.7);
  EXPECT_EQ(hm::expectation(model, 0.7), 0.7);
}

TEST(Reward, TruncatedGaussianStaysInRangeAndMatchesExpectation) {
  hm::Rng rng(9);
  const hm::RewardModel model{hm::RewardKind::gaussian, 0.3};
  for (double mean : {0.05, 0.5, 0.95}) {
    double sum = 0.0;
    const int draws = 200000;
    for (int k = 0; k < draws; ++k) {
      const double x = hm::draw(model, mean, rng);
      ASSERT_GE(x, 0.0);
      ASSERT_LE(x, 1.0);
      sum += x;
    }
    EXPECT_NEAR(sum / draws, hm::expectation(model, mean), 0.005) << mean;
  }
  // Truncation keeps the order of location parameters.
  EXPECT_LT(hm::expectation(model, 0.2), hm::expectation(model, 0.3));
}

TEST(Reward, ExpectedMaxAgreesWithMonteCarlo) {
  hm::Rng rng(21);
  const hm::RewardModel model{hm::RewardKind::gaussian, 0.2};
  double sum = 0.0;
  const int draws = 200000;
  for (int k = 0; k < draws; ++k) {
    sum += std::max(hm::draw(model, 0.4, rng), hm::draw(model, 0.6, rng));
  }
  EXPECT_NEAR(sum / draws, hm::expected_max(model, 0.4, 0.6), 0.004);
  EXPECT_NEAR(hm::expected_max(hm::RewardModel{}, 0.5, 0.5), 0.75, 1e-12);
}

TEST(Rng, SameSeedSameStream) {
  hm::Rng a(42);
  hm::Rng b(42);
  for (int k = 0; k < 1000; ++k) ASSERT_EQ(a.next(), b.next());
  hm::Rng c(7);
  for (int k = 0; k < 1000; ++k) {
    const auto v = c.below(6);
    ASSERT_LT(v, 6u);
  }
}
