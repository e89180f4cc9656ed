#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hintmatch/estimation.hpp"
#include "hintmatch/firm_policy.hpp"
#include "hintmatch/market.hpp"
#include "hintmatch/rng.hpp"

namespace hintmatch {

/// Round-robin exploration firm of agent `agent` (0-based) at round t >= 1:
/// the 1-based rule f_{(t + i mod m) + 1} with i = agent + 1.
inline int round_robin_firm(int agent, long t, int m) {
  return static_cast<int>((t + agent + 1) % m);
}

/// What one agent does in one round.
struct AgentAction {
  /// Firms interviewed; a repeated firm is sampled once per occurrence.
  std::vector<int> interviews;
  /// Firms applied to, in the order the agent would accept their offers.
  /// Empty means the agent sits the round out.
  std::vector<int> applications;
};

struct RoundOutcome {
  long t = 0;
  std::vector<AgentAction> actions;
  std::vector<std::uint8_t> gamma;  // per firm hiring flag
  Matching matching;
  std::vector<double> rewards;       // per agent
  std::vector<std::uint8_t> vacant;  // membership in V'(t)
  std::vector<std::uint8_t> changed; // membership in V(t)
};

inline std::vector<int> members(const std::vector<std::uint8_t>& flags) {
  std::vector<int> out;
  for (std::size_t k = 0; k < flags.size(); ++k) {
    if (flags[k]) out.push_back(static_cast<int>(k));
  }
  return out;
}

/// Everything the agent side may read when planning a round. Decentralized
/// wrappers narrow this further before it reaches an individual agent.
struct PlanContext {
  long t;
  int n;
  int m;
  const EstimatorState& agent_estimates;
  const PrefTable& firm_lists;
};

template <class P>
concept AgentPolicy = requires(P& policy, const PlanContext& ctx,
                               std::vector<AgentAction>& actions, const RoundOutcome& outcome,
                               Rng& rng) {
  { policy.interview_budget() } -> std::convertible_to<int>;
  policy.plan(ctx, actions, rng);
  policy.observe(outcome);
};

struct SimOptions {
  /// Firms know their preferences (oracle estimates, never abstain).
  bool certain_firms = false;
  /// Uncertain firms run the strategic rejection rule; otherwise they always hire.
  bool strategic_firms = true;
  /// Agents know their preferences; used to replay worked examples.
  bool oracle_agents = false;
};

/// Synchronous interview / application / feedback protocol.
template <AgentPolicy Policy>
class Simulation {
 public:
  Simulation(Market market, Policy policy, SimOptions options, std::uint64_t seed)
      : market_(std::move(market)),
        policy_(std::move(policy)),
        options_(options),
        rng_(seed),
        agent_est_(agent_estimator(market_, options.oracle_agents)),
        firm_est_(firm_estimator(market_, options.certain_firms)),
        firms_(market_.firms(), market_.agents(),
               options.certain_firms ? FirmMode::certain : FirmMode::uncertain,
               options.strategic_firms),
        previous_(market_.agents(), market_.firms()) {}

  /// Plays one round and returns its outcome (valid until the next call).
  const RoundOutcome& step() {
    const long t = ++round_;
    const int n = market_.agents();
    const int m = market_.firms();

    firm_lists_ = estimated_pref_table(firm_est_);
    outcome_.t = t;
    outcome_.actions.assign(static_cast<std::size_t>(n), AgentAction{});
    policy_.plan(PlanContext{t, n, m, agent_est_, firm_lists_}, outcome_.actions, rng_);
    validate_actions(t);

    for (int a = 0; a < n; ++a) {
      for (int f : outcome_.actions[static_cast<std::size_t>(a)].interviews) {
        agent_est_.record(a, f, market_.sample_agent(a, f, rng_));
        firm_est_.record(f, a, market_.sample_firm(f, a, rng_));
      }
    }

    // Applicant pools, each in the firm's current estimated order.
    std::vector<std::vector<int>> pools(static_cast<std::size_t>(m));
    for (int a = 0; a < n; ++a) {
      for (int f : outcome_.actions[static_cast<std::size_t>(a)].applications) {
        pools[static_cast<std::size_t>(f)].push_back(a);
      }
    }
    outcome_.gamma.assign(static_cast<std::size_t>(m), 1);
    for (int f = 0; f < m; ++f) {
      auto& pool = pools[static_cast<std::size_t>(f)];
      const auto rank = rank_of(firm_lists_[static_cast<std::size_t>(f)]);
      std::sort(pool.begin(), pool.end(), [&](int x, int y) {
        return rank[static_cast<std::size_t>(x)] < rank[static_cast<std::size_t>(y)];
      });
      if (!pool.empty()) {
        outcome_.gamma[static_cast<std::size_t>(f)] = static_cast<std::uint8_t>(
            firms_.decide(f, pool, firm_lists_[static_cast<std::size_t>(f)], t));
      }
    }

    outcome_.matching = resolve(pools);
    const auto hires = outcome_.matching.firm_view();
    const auto before = previous_.firm_view();

    outcome_.rewards.assign(static_cast<std::size_t>(n), 0.0);
    for (int a = 0; a < n; ++a) {
      const int f = outcome_.matching.firm_of(a);
      if (f != kUnmatched) outcome_.rewards[static_cast<std::size_t>(a)] = market_.sample_agent(a, f, rng_);
    }

    outcome_.vacant.assign(static_cast<std::size_t>(m), 0);
    outcome_.changed.assign(static_cast<std::size_t>(m), 0);
    for (int f = 0; f < m; ++f) {
      const auto k = static_cast<std::size_t>(f);
      outcome_.vacant[k] = hires[k] == kUnmatched;
      outcome_.changed[k] = outcome_.vacant[k] || hires[k] != before[k];
    }

    for (int f = 0; f < m; ++f) {
      firms_.update(f, t, outcome_.gamma[static_cast<std::size_t>(f)],
                    pools[static_cast<std::size_t>(f)], hires[static_cast<std::size_t>(f)]);
    }
    policy_.observe(outcome_);
    previous_ = outcome_.matching;
    return outcome_;
  }

  template <class Recorder>
  void run(long rounds, Recorder&& recorder) {
    for (long k = 0; k < rounds; ++k) recorder(step());
  }

  long round() const noexcept { return round_; }
  const Market& market() const noexcept { return market_; }
  Policy& policy() noexcept { return policy_; }
  const Policy& policy() const noexcept { return policy_; }
  const EstimatorState& agent_estimates() const noexcept { return agent_est_; }
  const EstimatorState& firm_estimates() const noexcept { return firm_est_; }
  const FirmPolicy& firm_policy() const noexcept { return firms_; }
  FirmPolicy& firm_policy() noexcept { return firms_; }
  const Matching& previous_matching() const noexcept { return previous_; }

  /// Seeds the matching that round 1 is compared against for V(1).
  void set_previous_matching(Matching matching) { previous_ = std::move(matching); }

 private:
  void validate_actions(long t) const {
    const int m = market_.firms();
    const int budget = policy_.interview_budget();
    for (std::size_t a = 0; a < outcome_.actions.size(); ++a) {
      const auto& act = outcome_.actions[a];
      const std::string who = "agent " + std::to_string(a + 1);
      const int size = static_cast<int>(act.interviews.size());
      if (size < 2 || size > budget) {
        throw ProtocolError(t, who + " interviews " + std::to_string(size) +
                                   " firms, budget allows 2.." + std::to_string(budget));
      }
      for (int f : act.interviews) {
        if (f < 0 || f >= m) throw ProtocolError(t, who + " interviews an unknown firm");
      }
      if (act.applications.size() > 2) {
        throw ProtocolError(t, who + " applies to more than two firms");
      }
      for (std::size_t k = 0; k < act.applications.size(); ++k) {
        const int f = act.applications[k];
        if (std::find(act.interviews.begin(), act.interviews.end(), f) == act.interviews.end()) {
          throw ProtocolError(t, who + " applies to a firm it did not interview");
        }
        if (k > 0 && f == act.applications[0]) {
          throw ProtocolError(t, who + " applies twice to the same firm");
        }
      }
    }
  }

  // Hiring firms offer down their ordered pools; an agent holds the offer it
  // ranks first among its applications. With single applications this is
  // "each firm admits its top applicant".
  Matching resolve(const std::vector<std::vector<int>>& pools) const {
    const int n = market_.agents();
    const int m = market_.firms();
    std::vector<std::size_t> cursor(static_cast<std::size_t>(m), 0);
    std::vector<int> held(static_cast<std::size_t>(n), kUnmatched);
    auto priority = [&](int a, int f) {
      const auto& apps = outcome_.actions[static_cast<std::size_t>(a)].applications;
      return static_cast<int>(std::find(apps.begin(), apps.end(), f) - apps.begin());
    };
    std::vector<int> offering;
    for (int f = 0; f < m; ++f) {
      if (outcome_.gamma[static_cast<std::size_t>(f)] && !pools[static_cast<std::size_t>(f)].empty()) {
        offering.push_back(f);
      }
    }
    while (!offering.empty()) {
      std::vector<int> next_round;
      for (int f : offering) {
        const auto& pool = pools[static_cast<std::size_t>(f)];
        auto& c = cursor[static_cast<std::size_t>(f)];
        if (c >= pool.size()) continue;
        const int a = pool[c];
        int& current = held[static_cast<std::size_t>(a)];
        if (current == kUnmatched || priority(a, f) < priority(a, current)) {
          if (current != kUnmatched) {
            ++cursor[static_cast<std::size_t>(current)];
            next_round.push_back(current);
          }
          current = f;
        } else {
          ++c;
          next_round.push_back(f);
        }
      }
      offering = std::move(next_round);
    }
    Matching matching(n, m);
    for (int a = 0; a < n; ++a) matching.assign(a, held[static_cast<std::size_t>(a)]);
    return matching;
  }

  Market market_;
  Policy policy_;
  SimOptions options_;
  Rng rng_;
  EstimatorState agent_est_;
  EstimatorState firm_est_;
  FirmPolicy firms_;
  Matching previous_;
  PrefTable firm_lists_;
  RoundOutcome outcome_;
  long round_ = 0;
};

/// Plays fixed actions for the first rounds, then hands control to `inner`,
/// which observes every round including the scripted ones. Used to put
/// stateless-start learners into a documented configuration.
template <AgentPolicy Policy>
class WithOpening {
 public:
  WithOpening(Policy inner, std::vector<std::vector<AgentAction>> opening)
      : inner_(std::move(inner)), opening_(std::move(opening)) {}

  int interview_budget() const { return inner_.interview_budget(); }

  void plan(const PlanContext& ctx, std::vector<AgentAction>& actions, Rng& rng) {
    if (ctx.t <= static_cast<long>(opening_.size())) {
      actions = opening_[static_cast<std::size_t>(ctx.t - 1)];
    } else {
      inner_.plan(ctx, actions, rng);
    }
  }

  void observe(const RoundOutcome& outcome) { inner_.observe(outcome); }

  Policy& inner() noexcept { return inner_; }
  const Policy& inner() const noexcept { return inner_; }

 private:
  Policy inner_;
  std::vector<std::vector<AgentAction>> opening_;
};

/// Runs T rounds, handing every outcome to `recorder`.
template <AgentPolicy Policy, class Recorder>
Simulation<Policy> run_horizon(const Market& market, Policy policy, SimOptions options, long T,
                               std::uint64_t seed, Recorder&& recorder) {
  if (T < 1) throw ParameterError("horizon must be at least one round");
  Simulation<Policy> sim(market, std::move(policy), options, seed);
  sim.run(T, recorder);
  return sim;
}

}  // namespace hintmatch
