#include <gtest/gtest.h>

#include "hintmatch/decentralized.hpp"
#include "hintmatch/examples.hpp"
#include "hintmatch/generate.hpp"
#include "hintmatch/stable.hpp"

namespace hm = hintmatch;

namespace {

hm::SimOptions oracle_everything() {
  hm::SimOptions o;
  o.certain_firms = true;
  o.oracle_agents = true;
  return o;
}

// k3 opening: both agents apply to f2, which admits a1.
std::vector<std::vector<hm::AgentAction>> k3_opening() {
  return {{{{1, hm::round_robin_firm(0, 1, 2)}, {1}}, {{1, hm::round_robin_firm(1, 1, 2)}, {1}}}};
}

std::vector<std::uint8_t> vac(std::initializer_list<int> flags) { return {flags.begin(), flags.end()}; }

}  // namespace

TEST(CandidateSets, Definitions) {
  const std::vector<long> r{12, 3};
  EXPECT_EQ(hm::drr_candidate_set(r, 10), (std::vector<int>{1}));
  const std::vector<long> zero{0, 0};
  EXPECT_EQ(hm::drr_candidate_set(zero, 1), (std::vector<int>{0, 1}));
  const std::vector<long> one{4, 0, 0};
  EXPECT_EQ(hm::drr_candidate_set(one, 2), (std::vector<int>{1, 2}));

  const std::vector<long> rr{5};
  const std::vector<long> later{7};
  const std::vector<long> none{0};
  EXPECT_EQ(hm::ancdrr_candidate_set(rr, later), (std::vector<int>{0}));
  EXPECT_TRUE(hm::ancdrr_candidate_set(rr, none).empty());
  EXPECT_EQ(hm::ancdrr_candidate_set(none, none), (std::vector<int>{0}));
  // A change in the rejection round itself does not readmit the firm.
  const std::vector<long> same{5};
  EXPECT_TRUE(hm::ancdrr_candidate_set(rr, same).empty());
}

TEST(DrrAgent, UpdatingUsesSnapshotThenCommits) {
  hm::DrrAgent agent(0, 1, 2);  // phase length 3
  hm::Rng rng(1);
  const hm::PrefList first{1, 0};
  const hm::PrefList flipped{0, 1};
  for (long t = 1; t <= 3; ++t) {
    const auto act = agent.decide({t, 1, 2, t == 1 ? first : flipped}, rng);
    ASSERT_EQ(act.applications, (std::vector<int>{1}));  // snapshot from t=1
    const auto v = vac({1, 0});
    agent.observe({t, act, 1, v, v});
  }
  // Committing: current estimate disagrees with the committed firm.
  const auto act = agent.decide({4, 1, 2, flipped}, rng);
  EXPECT_FALSE(agent.updating());
  EXPECT_EQ(agent.committed(), 1);
  EXPECT_TRUE(act.applications.empty());
  const auto v = vac({1, 1});
  agent.observe({4, act, hm::kUnmatched, v, v});
  EXPECT_EQ(agent.t_gs(), 5);
  EXPECT_EQ(agent.last_triggers() & hm::DrrAgent::kInconsistency, hm::DrrAgent::kInconsistency);
  const auto next = agent.decide({5, 1, 2, flipped}, rng);
  EXPECT_TRUE(agent.updating());
  EXPECT_EQ(next.applications, (std::vector<int>{0}));
}

TEST(DrrAgent, StableCommitKeepsApplying) {
  hm::DrrAgent agent(0, 1, 2);
  hm::Rng rng(1);
  const hm::PrefList list{0, 1};
  for (long t = 1; t <= 10; ++t) {
    const auto act = agent.decide({t, 1, 2, list}, rng);
    ASSERT_EQ(act.applications, (std::vector<int>{0}));
    const auto v = vac({0, 1});
    agent.observe({t, act, 0, v, v});
  }
  EXPECT_EQ(agent.t_gs(), 1);
}

TEST(DrrAgent, RejectionBookkeeping) {
  hm::DrrAgent agent(0, 2, 3);
  hm::Rng rng(1);
  const hm::PrefList list{0, 1, 2};
  auto act = agent.decide({1, 2, 3, list}, rng);
  agent.observe({1, act, hm::kUnmatched, vac({0, 1, 1}), vac({0, 1, 1})});  // lost to another hire
  EXPECT_EQ(agent.rejections()[0], 1);
  EXPECT_EQ(agent.candidate_set(), (std::vector<int>{1, 2}));  // r = 1 is not below t_gs = 1
  act = agent.decide({2, 2, 3, list}, rng);
  EXPECT_EQ(act.applications, (std::vector<int>{1}));
  agent.observe({2, act, hm::kUnmatched, vac({0, 1, 1}), vac({0, 1, 1})});  // strategic abstention
  EXPECT_EQ(agent.rejections()[1], 0);
}

TEST(DrrRun, CoordinatedExampleConvergesWithOracles) {
  const auto market = hm::named_example("coordfgs");
  auto sim = hm::Simulation(market, hm::make_drr(3, 3), oracle_everything(), 4);
  const auto stable = hm::enumerate_stable_matchings(market).matchings.front();
  for (long t = 1; t <= 200; ++t) {
    const auto& o = sim.step();
    if (t > 27) {
      ASSERT_EQ(o.matching, stable) << t;
    }
  }
  ASSERT_EQ(sim.policy().phases().size(), 1u);
  EXPECT_EQ(sim.policy().phases()[0].committed, stable.agent_view());
}

// Every completed updating phase ends in a perfect matching; committed firms
// are in the top n of the snapshot; firms never abstain twice in a row while
// updating.
TEST(DrrRun, StructuralProperties) {
  hm::Rng rng(77);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(2));
    const int m = n + static_cast<int>(rng.below(2));
    const auto market = hm::generate_market({n, m, 0.15, {}}, rng);
    auto sim = hm::Simulation(market, hm::make_drr(n, m), {}, rng.next());
    std::vector<std::uint8_t> prev_abstain(static_cast<std::size_t>(m), 0);
    for (long t = 1; t <= 4000; ++t) {
      const auto& o = sim.step();
      const bool updating = sim.policy().updating();
      for (int f = 0; f < m; ++f) {
        const auto k = static_cast<std::size_t>(f);
        bool has_pool = false;
        for (const auto& act : o.actions) {
          for (int g : act.applications) has_pool = has_pool || g == f;
        }
        const std::uint8_t abstain = has_pool && o.gamma[k] == 0;
        if (updating) {
          ASSERT_FALSE(abstain && prev_abstain[k]) << "t=" << t << " f=" << f;
        }
        prev_abstain[k] = updating ? abstain : 0;
      }
      const auto& lead = sim.policy().agent(0);
      if (!updating && t == lead.t_gs() + lead.phase_length()) {
        for (int a = 0; a < n; ++a) {
          const auto& agent = sim.policy().agent(a);
          const auto& snap = agent.snapshot();
          ASSERT_NE(std::find(snap.begin(), snap.begin() + n, agent.committed()), snap.begin() + n);
        }
      }
    }
    for (const auto& p : sim.policy().phases()) {
      if (p.complete) {
        ASSERT_TRUE(p.final_updating.perfect()) << "phase " << p.index;
      }
    }
  }
}

TEST(AncdrrRun, K3CycleWithOracles) {
  const auto market = hm::named_example("k3");
  hm::WithOpening policy(hm::make_ancdrr(2, 2), k3_opening());
  auto sim = hm::Simulation(market, policy, oracle_everything(), 1);
  std::vector<hm::RoundOutcome> log;
  for (int t = 0; t < 8; ++t) log.push_back(sim.step());
  EXPECT_EQ(log[1].actions[0].applications, (std::vector<int>{0}));
  EXPECT_EQ(log[1].actions[1].applications, (std::vector<int>{0}));
  EXPECT_EQ(log[1].matching.agent_view(), (std::vector<int>{hm::kUnmatched, 0}));
  EXPECT_EQ(log[2].actions[0].applications, (std::vector<int>{1}));
  EXPECT_EQ(log[2].actions[1].applications, (std::vector<int>{1}));
  EXPECT_EQ(log[2].matching.agent_view(), (std::vector<int>{1, hm::kUnmatched}));
  for (std::size_t k = 3; k < log.size(); ++k) {
    EXPECT_EQ(log[k].matching, log[k - 2].matching);
    EXPECT_EQ(log[k].actions[0].applications, log[k - 2].actions[0].applications);
  }
}

TEST(AncdrrRun, AppliesToBestCandidate) {
  hm::Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto market = hm::generate_market({3, 4, 0.1, {}}, rng);
    auto sim = hm::Simulation(market, hm::make_ancdrr(3, 4), {}, rng.next());
    for (long t = 1; t <= 2000; ++t) {
      std::vector<std::vector<int>> candidates;
      std::vector<hm::PrefList> lists;
      for (int a = 0; a < 3; ++a) {
        candidates.push_back(sim.policy().agent(a).candidate_set());
        lists.push_back(hm::estimated_pref_list(sim.agent_estimates(), a));
      }
      const auto& o = sim.step();
      for (int a = 0; a < 3; ++a) {
        const int f = o.actions[static_cast<std::size_t>(a)].applications.at(0);
        const auto& cand = candidates[static_cast<std::size_t>(a)];
        if (cand.empty()) continue;
        for (int g : lists[static_cast<std::size_t>(a)]) {
          if (g == f) break;
          ASSERT_EQ(std::find(cand.begin(), cand.end(), g), cand.end());
        }
      }
    }
  }
}

TEST(Eancdrr, LambdaRange) {
  EXPECT_THROW(hm::EancdrrAgent(0, 2, 2, 0.0), hm::ParameterError);
  EXPECT_THROW(hm::EancdrrAgent(0, 2, 2, 1.0), hm::ParameterError);
  EXPECT_NO_THROW(hm::EancdrrAgent(0, 2, 2, 0.5));
}

TEST(Eancdrr, FirstRoundIsSingleton) {
  hm::EancdrrAgent agent(0, 2, 3, 0.9);
  hm::Rng rng(1);
  const hm::PrefList list{2, 0, 1};
  const auto act = agent.decide({1, 2, 3, list}, rng);
  EXPECT_EQ(act.applications, (std::vector<int>{2}));
  EXPECT_EQ(act.interviews.size(), 2u);
}

TEST(Eancdrr, SetApplicationSuppressesVacancy) {
  const auto market = hm::named_example("multappl");
  const int rr0 = hm::round_robin_firm(0, 2, 2);
  const int rr1 = hm::round_robin_firm(1, 2, 2);
  std::vector<std::vector<hm::AgentAction>> opening{
      {{{1, 0}, {1}}, {{0, 1}, {0}}},
      {{{0, 1, rr0}, {0, 1}}, {{0, rr1}, {0}}},
  };
  auto sim = hm::Simulation(market, hm::WithOpening(hm::make_eancdrr(2, 2, 0.5), opening),
                            oracle_everything(), 1);
  sim.step();
  const auto& o = sim.step();
  EXPECT_EQ(o.matching.firm_of(0), 1);
  EXPECT_EQ(o.matching.firm_of(1), 0);
  EXPECT_FALSE(o.vacant[1]);
  EXPECT_FALSE(o.changed[1]);
  EXPECT_EQ(sim.policy().inner().agent(0).anchor(), 1);
}

TEST(Eancdrr, EscapesK3Cycle) {
  const auto market = hm::named_example("k3");
  const auto stable = hm::enumerate_stable_matchings(market).matchings;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto sim = hm::Simulation(market, hm::WithOpening(hm::make_eancdrr(2, 2, 0.5), k3_opening()),
                              oracle_everything(), seed);
    hm::Matching last;
    for (int t = 0; t < 200; ++t) last = sim.step().matching;
    EXPECT_NE(std::find(stable.begin(), stable.end(), last), stable.end()) << seed;
  }
}
