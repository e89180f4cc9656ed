#pragma once

#include <vector>

#include "hintmatch/engine.hpp"
#include "hintmatch/stable.hpp"

namespace hintmatch {

struct CiaPlan {
  std::vector<int> apply;
  std::vector<int> round_robin;
  std::vector<std::vector<int>> interviews;  // {apply, round_robin}; may repeat a firm
};

/// Agent-proposing deferred acceptance on the current estimated lists, plus
/// one round-robin exploration interview per agent.
inline CiaPlan cia_plan(const PrefTable& agent_lists, const PrefTable& firm_lists, long t) {
  const auto matching = gale_shapley(agent_lists, firm_lists, Side::agents);
  const int n = static_cast<int>(agent_lists.size());
  const int m = static_cast<int>(firm_lists.size());
  CiaPlan plan;
  plan.apply = matching.agent_view();
  for (int a = 0; a < n; ++a) {
    const int rr = round_robin_firm(a, t, m);
    plan.round_robin.push_back(rr);
    plan.interviews.push_back({plan.apply[static_cast<std::size_t>(a)], rr});
  }
  return plan;
}

/// Central interview allocator: sees every estimated list and directs all
/// interviews and applications.
class CentralAllocator {
 public:
  int interview_budget() const noexcept { return 2; }

  void plan(const PlanContext& ctx, std::vector<AgentAction>& actions, Rng&) {
    const auto plan = cia_plan(estimated_pref_table(ctx.agent_estimates), ctx.firm_lists, ctx.t);
    for (int a = 0; a < ctx.n; ++a) {
      const auto k = static_cast<std::size_t>(a);
      actions[k] = AgentAction{plan.interviews[k], {plan.apply[k]}};
    }
  }

  void observe(const RoundOutcome&) {}
};

}  // namespace hintmatch
