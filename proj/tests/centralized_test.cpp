#include <gtest/gtest.h>

#include "hintmatch/centralized.hpp"
#include "hintmatch/examples.hpp"

namespace hm = hintmatch;

TEST(Cia, PlanOnTrueListsIsAgentOptimal) {
  const auto t = hm::example_tables("ucb3x3");
  const auto plan = hm::cia_plan(t.agents, t.firms, 1);
  EXPECT_EQ(plan.apply, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(plan.round_robin, (std::vector<int>{2, 0, 1}));
  EXPECT_EQ(plan.interviews[0], (std::vector<int>{0, 2}));
}

TEST(Cia, PlanOnMisorderedList) {
  auto t = hm::example_tables("ucb3x3");
  t.agents[2] = {0, 2, 1};
  EXPECT_EQ(hm::cia_plan(t.agents, t.firms, 1).apply, (std::vector<int>{1, 0, 2}));
}

TEST(Cia, SingleAgentTakesTop) {
  const hm::PrefTable agents{{1, 0}};
  const hm::PrefTable firms{{0}, {0}};
  EXPECT_EQ(hm::cia_plan(agents, firms, 4).apply, (std::vector<int>{1}));
}

TEST(Cia, NoCollisionsAndConvergence) {
  hm::Rng rng(31);
  const auto market = hm::generate_alpha_reducible({3, 3, 0.2, {}}, rng);
  const auto optimal = hm::stable_extremes(market).agent_optimal;
  long agree = 0;
  hm::SimOptions options;
  hm::run_horizon(market, hm::CentralAllocator{}, options, 5000, 3, [&](const hm::RoundOutcome& o) {
    std::vector<int> per_firm(3, 0);
    for (const auto& act : o.actions) {
      for (int f : act.applications) ++per_firm[static_cast<std::size_t>(f)];
    }
    for (int c : per_firm) ASSERT_LE(c, 1);
    if (o.t > 4000 && o.matching == optimal) ++agree;
  });
  EXPECT_GT(agree, 900);
}
