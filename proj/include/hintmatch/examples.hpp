#pragma once

#include <array>
#include <string>
#include <string_view>

#include "hintmatch/generate.hpp"

namespace hintmatch {

// Small markets from the literature on learning stable matchings with
// interviews, given as ordinal tables (0-based: f1 -> 0, a1 -> 0).

inline constexpr std::array<std::string_view, 6> kExampleNames = {
    "introstrategic", "coordfgs", "ucb3x3", "drrs4", "k3", "multappl"};

struct OrdinalTables {
  PrefTable agents;
  PrefTable firms;
};

inline OrdinalTables example_tables(std::string_view name) {
  if (name == "introstrategic") {
    // One firm mis-ranking its applicants can lock in an unstable outcome.
    return {{{0, 1}, {0, 1}}, {{0, 1}, {1, 0}}};
  }
  if (name == "coordfgs") {
    // alpha-reducible; vacancy-only feedback hides a hiring change at f2.
    return {{{0, 1, 2}, {1, 0, 2}, {0, 2, 1}}, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}};
  }
  if (name == "ucb3x3") {
    // Agent-optimal matching is (a1,f1),(a2,f2),(a3,f3).
    return {{{0, 1, 2}, {1, 0, 2}, {2, 0, 1}}, {{1, 2, 0}, {0, 1, 2}, {2, 0, 1}}};
  }
  if (name == "drrs4") {
    // Two stable matchings; decentralized learning can settle in the worse one.
    return {{{0, 1, 2}, {1, 2, 0}, {2, 1, 0}}, {{1, 2, 0}, {2, 0, 1}, {0, 1, 2}}};
  }
  if (name == "k3" || name == "multappl") {
    // 2x2 with two stable matchings; single applications can cycle forever.
    return {{{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}};
  }
  std::string known;
  for (auto k : kExampleNames) known += (known.empty() ? "" : ", ") + std::string(k);
  throw InputError("unknown example '" + std::string(name) + "'; known examples: " + known);
}

inline Market named_example(std::string_view name, RewardModel reward = {}) {
  const auto tables = example_tables(name);
  return market_from_orders(tables.agents, tables.firms, reward);
}

}  // namespace hintmatch
