#include <gtest/gtest.h>

#include "hintmatch/firm_policy.hpp"

namespace hm = hintmatch;

namespace {

hm::FirmState fresh(int n, hm::FirmMode mode = hm::FirmMode::uncertain) {
  return hm::FirmState{std::vector<long>(static_cast<std::size_t>(n), 0), 0, mode};
}

}  // namespace

TEST(FirmPolicy, CertainFirmAlwaysHires) {
  auto state = fresh(2, hm::FirmMode::certain);
  state.rejected_at = {5, 5};
  const std::vector<int> pool{1};
  const std::vector<int> list{0, 1};
  EXPECT_EQ(hm::strategic_rejection_decision(pool, list, state), 1);
}

TEST(FirmPolicy, CorrectedListTriggersAbstention) {
  // f1 turned a1 down at t=3 in favour of a2; its list now ranks a1 first and
  // only a2 applies.
  auto state = fresh(2);
  const std::vector<int> both{1, 0};
  hm::update_firm_rej_vars(state, 3, 1, both, 1);
  EXPECT_EQ(state.rejected_at[0], 3);
  const std::vector<int> pool{1};
  const std::vector<int> corrected{0, 1};
  EXPECT_EQ(hm::strategic_rejection_decision(pool, corrected, state), 0);
  hm::update_firm_rej_vars(state, 4, 0, pool, hm::kUnmatched);
  EXPECT_EQ(state.vacant_at, 4);
  EXPECT_EQ(state.rejected_at[0], 3);
  // c now dominates: the next round hires.
  EXPECT_EQ(hm::strategic_rejection_decision(pool, corrected, state), 1);
}

TEST(FirmPolicy, FreshStateNeverAbstains) {
  const auto state = fresh(3);
  const std::vector<int> pool{2};
  const std::vector<int> list{0, 1, 2};
  EXPECT_EQ(hm::strategic_rejection_decision(pool, list, state), 1);
}

TEST(FirmPolicy, EmptyPoolCountsAsVacancy) {
  auto state = fresh(2);
  hm::update_firm_rej_vars(state, 7, 1, {}, hm::kUnmatched);
  EXPECT_EQ(state.vacant_at, 7);
}

TEST(FirmPolicy, HiringRecordsRejectionsOnly) {
  auto state = fresh(3);
  const std::vector<int> pool{0, 2};
  hm::update_firm_rej_vars(state, 5, 1, pool, 2);
  EXPECT_EQ(state.rejected_at, (std::vector<long>{5, 0, 0}));
  EXPECT_EQ(state.vacant_at, 0);
}

TEST(FirmPolicy, NonStrategicWrapperAlwaysHires) {
  hm::FirmPolicy firms(1, 2, hm::FirmMode::uncertain, false);
  const std::vector<int> both{1, 0};
  firms.update(0, 1, 1, both, 1);
  const std::vector<int> pool{1};
  const std::vector<int> list{0, 1};
  EXPECT_EQ(firms.decide(0, pool, list, 2), 1);
  hm::FirmPolicy strategic(1, 2, hm::FirmMode::uncertain, true);
  strategic.update(0, 1, 1, both, 1);
  EXPECT_EQ(strategic.decide(0, pool, list, 2), 0);
}

// Property: right after an abstention no agent satisfies the trigger.
TEST(FirmPolicy, AbstentionResetsTrigger) {
  hm::Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    auto state = fresh(n);
    long t = 1;
    for (; t < 20; ++t) {
      std::vector<int> pool;
      for (int a = 0; a < n; ++a) {
        if (rng.bernoulli(0.5)) pool.push_back(a);
      }
      const int hired = pool.empty() ? hm::kUnmatched : pool[rng.below(pool.size())];
      hm::update_firm_rej_vars(state, t, 1, pool, hired);
    }
    hm::update_firm_rej_vars(state, t, 0, {}, hm::kUnmatched);
    std::vector<int> list(static_cast<std::size_t>(n));
    std::iota(list.begin(), list.end(), 0);
    rng.shuffle(std::span<int>(list));
    const std::vector<int> pool{list.back()};
    ASSERT_EQ(hm::strategic_rejection_decision(pool, list, state), 1);
  }
}
