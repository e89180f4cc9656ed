#include <gtest/gtest.h>

#include <algorithm>

#include "hintmatch/examples.hpp"
#include "hintmatch/generate.hpp"
#include "hintmatch/stable.hpp"

namespace hm = hintmatch;

namespace {

// Independent stability check: scan all n*m pairs against utilities directly.
bool stable_by_scan(const hm::Market& market, const hm::Matching& mu) {
  const auto hire = mu.firm_view();
  for (int a = 0; a < market.agents(); ++a) {
    for (int f = 0; f < market.firms(); ++f) {
      const int cur = mu.firm_of(a);
      const bool agent_wants = cur == hm::kUnmatched || market.agent_mean(a, f) > market.agent_mean(a, cur);
      const int inc = hire[static_cast<std::size_t>(f)];
      const bool firm_wants = inc == hm::kUnmatched || market.firm_mean(f, a) > market.firm_mean(f, inc);
      if (agent_wants && firm_wants) return false;
    }
  }
  return true;
}

hm::Matching make(std::vector<int> firm_of, int m) { return hm::Matching(std::move(firm_of), m); }

}  // namespace

TEST(GaleShapley, UcbExampleAgentOptimal) {
  const auto t = hm::example_tables("ucb3x3");
  EXPECT_EQ(hm::gale_shapley(t.agents, t.firms, hm::Side::agents), make({0, 1, 2}, 3));
}

TEST(GaleShapley, UcbExampleMisreport) {
  auto t = hm::example_tables("ucb3x3");
  t.agents[2] = {0, 2, 1};
  EXPECT_EQ(hm::gale_shapley(t.agents, t.firms, hm::Side::agents), make({1, 0, 2}, 3));
}

TEST(GaleShapley, SingleAgentGetsTopFirm) {
  const hm::PrefTable agents{{2, 0, 1}};
  const hm::PrefTable firms{{0}, {0}, {0}};
  EXPECT_EQ(hm::gale_shapley(agents, firms, hm::Side::agents).firm_of(0), 2);
  EXPECT_EQ(hm::gale_shapley(agents, firms, hm::Side::firms).firm_of(0), 2);
}

TEST(GaleShapley, MalformedListsRejected) {
  const hm::PrefTable agents{{0, 0}};
  const hm::PrefTable firms{{0}, {0}};
  EXPECT_THROW(hm::gale_shapley(agents, firms, hm::Side::agents), hm::InputError);
}

TEST(BlockingPairs, Drrs4UnstableMatching) {
  const auto market = hm::named_example("drrs4");
  const auto truth = hm::ground_truth_prefs(market);
  const auto pairs = hm::blocking_pairs(make({1, 2, 0}, 3), truth.agents, truth.firms);
  EXPECT_FALSE(pairs.empty());
  EXPECT_FALSE(stable_by_scan(market, make({1, 2, 0}, 3)));
}

TEST(BlockingPairs, EmptyMatchingOneByOne) {
  const hm::PrefTable agents{{0}};
  const hm::PrefTable firms{{0}};
  const auto pairs = hm::blocking_pairs(hm::Matching(1, 1), agents, firms);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0], (hm::Pair{0, 0}));
}

TEST(Enumerate, NamedExamples) {
  const auto drrs4 = hm::enumerate_stable_matchings(hm::named_example("drrs4"));
  // Both lattice extremes plus the middle matching (a1,f1) (a2,f3) (a3,f2).
  ASSERT_EQ(drrs4.matchings.size(), 3u);
  EXPECT_NE(std::find(drrs4.matchings.begin(), drrs4.matchings.end(), make({0, 2, 1}, 3)),
            drrs4.matchings.end());
  EXPECT_NE(std::find(drrs4.matchings.begin(), drrs4.matchings.end(), make({0, 1, 2}, 3)),
            drrs4.matchings.end());
  EXPECT_NE(std::find(drrs4.matchings.begin(), drrs4.matchings.end(), make({2, 0, 1}, 3)),
            drrs4.matchings.end());
  EXPECT_EQ(hm::enumerate_stable_matchings(hm::named_example("k3")).matchings.size(), 2u);
  const auto intro = hm::enumerate_stable_matchings(hm::named_example("introstrategic"));
  ASSERT_EQ(intro.matchings.size(), 1u);
  EXPECT_EQ(intro.matchings[0], make({0, 1}, 2));
}

TEST(Enumerate, SizeGuard) {
  hm::Rng rng(1);
  const auto big = hm::generate_market({9, 9, 0.05, {}}, rng);
  EXPECT_THROW(hm::enumerate_stable_matchings(big), hm::ParameterError);
}

TEST(AlphaReducibility, Examples) {
  const auto seq = hm::alpha_reducibility(hm::named_example("coordfgs"));
  ASSERT_TRUE(seq.has_value());
  EXPECT_EQ(*seq, (std::vector<hm::Pair>{{0, 0}, {1, 1}, {2, 2}}));
  EXPECT_FALSE(hm::alpha_reducibility(hm::named_example("ucb3x3")).has_value());
  hm::Market one(1, 2, {0.2, 0.8}, {0.5, 0.6});
  EXPECT_EQ(*hm::alpha_reducibility(one), (std::vector<hm::Pair>{{0, 1}}));
}

// Random markets: GS output is stable under an independent scan, equals the
// enumerated extremes, and every enumerated matching is stable.
TEST(Property, RandomMarketsAgreeWithEnumeration) {
  hm::Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    const int m = n + static_cast<int>(rng.below(static_cast<std::uint64_t>(6 - n)));
    const auto market = hm::generate_market({n, m, 0.01, {}}, rng);
    const auto ext = hm::stable_extremes(market);
    const auto set = hm::enumerate_stable_matchings(market);
    ASSERT_TRUE(stable_by_scan(market, ext.agent_optimal));
    ASSERT_TRUE(stable_by_scan(market, ext.agent_pessimal));
    ASSERT_TRUE(ext.agent_optimal.perfect());
    for (const auto& mu : set.matchings) ASSERT_TRUE(stable_by_scan(market, mu));
    ASSERT_EQ(ext.agent_optimal.agent_view(), set.best_firm);
    ASSERT_EQ(ext.agent_pessimal.agent_view(), set.worst_firm);
  }
}
