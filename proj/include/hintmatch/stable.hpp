#pragma once

#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "hintmatch/market.hpp"

namespace hintmatch {

namespace detail {

inline void require_tables(const PrefTable& agent_prefs, const PrefTable& firm_prefs) {
  const int n = static_cast<int>(agent_prefs.size());
  const int m = static_cast<int>(firm_prefs.size());
  if (n < 1 || m < n) throw InputError("preference tables need 1 <= n <= m");
  for (const auto& list : agent_prefs) require_permutation(list, m, "agent preference list");
  for (const auto& list : firm_prefs) require_permutation(list, n, "firm preference list");
}

}  // namespace detail

/// Deferred acceptance over complete strict lists.
///
/// Agents proposing yields the agent-optimal stable matching; firms proposing
/// yields the agent-pessimal one. Since n <= m every agent ends up matched.
inline Matching gale_shapley(const PrefTable& agent_prefs, const PrefTable& firm_prefs,
                             Side proposer) {
  detail::require_tables(agent_prefs, firm_prefs);
  const int n = static_cast<int>(agent_prefs.size());
  const int m = static_cast<int>(firm_prefs.size());

  // Generic DA: proposers walk their lists, receivers hold their best offer.
  const PrefTable& proposer_prefs = proposer == Side::agents ? agent_prefs : firm_prefs;
  const PrefTable& receiver_prefs = proposer == Side::agents ? firm_prefs : agent_prefs;
  const int proposers = proposer == Side::agents ? n : m;
  const int receivers = proposer == Side::agents ? m : n;

  std::vector<std::vector<int>> receiver_rank;
  receiver_rank.reserve(static_cast<std::size_t>(receivers));
  for (const auto& list : receiver_prefs) receiver_rank.push_back(rank_of(list));

  std::vector<int> next(static_cast<std::size_t>(proposers), 0);
  std::vector<int> held(static_cast<std::size_t>(receivers), kUnmatched);
  std::deque<int> free;
  for (int p = 0; p < proposers; ++p) free.push_back(p);

  while (!free.empty()) {
    const int p = free.front();
    free.pop_front();
    const auto& list = proposer_prefs[static_cast<std::size_t>(p)];
    auto& cursor = next[static_cast<std::size_t>(p)];
    if (cursor >= static_cast<int>(list.size())) continue;  // exhausted, stays single
    const int r = list[static_cast<std::size_t>(cursor++)];
    int& current = held[static_cast<std::size_t>(r)];
    const auto& rank = receiver_rank[static_cast<std::size_t>(r)];
    if (current == kUnmatched) {
      current = p;
    } else if (rank[static_cast<std::size_t>(p)] < rank[static_cast<std::size_t>(current)]) {
      free.push_back(current);
      current = p;
    } else {
      free.push_back(p);
    }
  }

  Matching matching(n, m);
  for (int r = 0; r < receivers; ++r) {
    const int p = held[static_cast<std::size_t>(r)];
    if (p == kUnmatched) continue;
    if (proposer == Side::agents) {
      matching.assign(p, r);
    } else {
      matching.assign(r, p);
    }
  }
  return matching;
}

struct Pair {
  int agent;
  int firm;
  friend bool operator==(const Pair&, const Pair&) = default;
};

/// All pairs (a, f) where a strictly prefers f to its match and f strictly
/// prefers a to its hire. Being unmatched ranks below every partner.
inline std::vector<Pair> blocking_pairs(const Matching& matching, const PrefTable& agent_prefs,
                                        const PrefTable& firm_prefs) {
  const int n = static_cast<int>(agent_prefs.size());
  const auto hire = matching.firm_view();
  std::vector<Pair> pairs;
  for (int a = 0; a < n; ++a) {
    const auto& list = agent_prefs[static_cast<std::size_t>(a)];
    const int current = matching.firm_of(a);
    for (int f : list) {
      if (f == current) break;  // everything after is worse than the match
      const int incumbent = hire[static_cast<std::size_t>(f)];
      if (incumbent == kUnmatched) {
        pairs.push_back({a, f});
        continue;
      }
      for (int b : firm_prefs[static_cast<std::size_t>(f)]) {
        if (b == a) {
          pairs.push_back({a, f});
          break;
        }
        if (b == incumbent) break;
      }
    }
  }
  return pairs;
}

inline bool is_stable(const Matching& matching, const PrefTable& agent_prefs,
                      const PrefTable& firm_prefs) {
  return blocking_pairs(matching, agent_prefs, firm_prefs).empty();
}

/// Every stable matching of a small market, found by brute force.
struct StableSet {
  std::vector<Matching> matchings;
  std::vector<int> best_firm;   // per agent, highest-utility stable partner
  std::vector<int> worst_firm;  // per agent, lowest-utility stable partner
  std::vector<int> best_agent;  // per firm, highest-utility stable partner (kUnmatched if none)
  std::vector<int> worst_agent;
};

inline constexpr int kEnumerationMaxAgents = 8;
inline constexpr int kEnumerationMaxFirms = 10;

inline StableSet enumerate_stable_matchings(const Market& market) {
  const int n = market.agents();
  const int m = market.firms();
  if (n > kEnumerationMaxAgents || m > kEnumerationMaxFirms) {
    throw ParameterError("stable-matching enumeration limited to n <= " +
                         std::to_string(kEnumerationMaxAgents) + " and m <= " +
                         std::to_string(kEnumerationMaxFirms));
  }
  const auto truth = ground_truth_prefs(market);

  StableSet set;
  std::vector<int> firm_of(static_cast<std::size_t>(n), kUnmatched);
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  auto recurse = [&](auto&& self, int a) -> void {
    if (a == n) {
      Matching candidate(firm_of, m);
      if (is_stable(candidate, truth.agents, truth.firms)) set.matchings.push_back(candidate);
      return;
    }
    for (int f = 0; f < m; ++f) {
      if (used[static_cast<std::size_t>(f)]) continue;
      used[static_cast<std::size_t>(f)] = true;
      firm_of[static_cast<std::size_t>(a)] = f;
      self(self, a + 1);
      used[static_cast<std::size_t>(f)] = false;
    }
  };
  recurse(recurse, 0);

  set.best_firm.assign(static_cast<std::size_t>(n), kUnmatched);
  set.worst_firm.assign(static_cast<std::size_t>(n), kUnmatched);
  set.best_agent.assign(static_cast<std::size_t>(m), kUnmatched);
  set.worst_agent.assign(static_cast<std::size_t>(m), kUnmatched);
  for (const auto& mu : set.matchings) {
    for (int a = 0; a < n; ++a) {
      const int f = mu.firm_of(a);
      auto& best = set.best_firm[static_cast<std::size_t>(a)];
      auto& worst = set.worst_firm[static_cast<std::size_t>(a)];
      if (best == kUnmatched || market.agent_mean(a, f) > market.agent_mean(a, best)) best = f;
      if (worst == kUnmatched || market.agent_mean(a, f) < market.agent_mean(a, worst)) worst = f;
      auto& fbest = set.best_agent[static_cast<std::size_t>(f)];
      auto& fworst = set.worst_agent[static_cast<std::size_t>(f)];
      if (fbest == kUnmatched || market.firm_mean(f, a) > market.firm_mean(f, fbest)) fbest = a;
      if (fworst == kUnmatched || market.firm_mean(f, a) < market.firm_mean(f, fworst)) fworst = a;
    }
  }
  return set;
}

/// Repeatedly removes a pair of mutual top choices from the remaining
/// sub-market. Returns the removal order when it consumes every agent, or
/// nothing when some reached sub-market has no such pair.
inline std::optional<std::vector<Pair>> alpha_reducibility(const Market& market) {
  const int n = market.agents();
  const int m = market.firms();
  std::vector<bool> agent_left(static_cast<std::size_t>(n), true);
  std::vector<bool> firm_left(static_cast<std::size_t>(m), true);
  std::vector<Pair> sequence;

  auto top_firm = [&](int a) {
    int best = kUnmatched;
    for (int f = 0; f < m; ++f) {
      if (firm_left[static_cast<std::size_t>(f)] &&
          (best == kUnmatched || market.agent_mean(a, f) > market.agent_mean(a, best))) {
        best = f;
      }
    }
    return best;
  };
  auto top_agent = [&](int f) {
    int best = kUnmatched;
    for (int a = 0; a < n; ++a) {
      if (agent_left[static_cast<std::size_t>(a)] &&
          (best == kUnmatched || market.firm_mean(f, a) > market.firm_mean(f, best))) {
        best = a;
      }
    }
    return best;
  };

  while (static_cast<int>(sequence.size()) < n) {
    bool found = false;
    for (int a = 0; a < n && !found; ++a) {
      if (!agent_left[static_cast<std::size_t>(a)]) continue;
      const int f = top_firm(a);
      if (top_agent(f) == a) {
        sequence.push_back({a, f});
        agent_left[static_cast<std::size_t>(a)] = false;
        firm_left[static_cast<std::size_t>(f)] = false;
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  return sequence;
}

/// Best and worst stable partner of every agent, via the two extremes of the
/// stable lattice (agent- and firm-proposing deferred acceptance).
struct StableExtremes {
  Matching agent_optimal;
  Matching agent_pessimal;
};

inline StableExtremes stable_extremes(const Market& market) {
  const auto truth = ground_truth_prefs(market);
  return {gale_shapley(truth.agents, truth.firms, Side::agents),
          gale_shapley(truth.agents, truth.firms, Side::firms)};
}

}  // namespace hintmatch
