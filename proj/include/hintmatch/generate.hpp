#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "hintmatch/market.hpp"
#include "hintmatch/rng.hpp"

namespace hintmatch {

struct MarketParams {
  int n = 3;
  int m = 3;
  double min_gap = 0.1;
  RewardModel reward{};
};

namespace detail {

inline void check_params(const MarketParams& params) {
  if (params.n < 1 || params.m < params.n) {
    throw ParameterError("market generator needs 1 <= n <= m");
  }
  const int longest = std::max(params.n, params.m);
  // A row of L values separated by min_gap spans min_gap*(L-1); the jitter
  // needs a strictly positive slack in [0,1].
  if (!(params.min_gap >= 0.0) || params.min_gap * (longest - 1) >= 1.0) {
    throw ParameterError("min_gap " + std::to_string(params.min_gap) + " infeasible for rows of " +
                         std::to_string(longest) + " values in [0,1]");
  }
}

// `count` values in [0,1], ascending, consecutive ones at least `gap` apart:
// sorted uniforms on [0, 1 - gap*(count-1)] shifted by gap*k.
inline std::vector<double> jittered_levels(int count, double gap, Rng& rng) {
  const double slack = 1.0 - gap * (count - 1);
  std::vector<double> levels(static_cast<std::size_t>(count));
  for (auto& v : levels) v = rng.uniform() * slack;
  std::sort(levels.begin(), levels.end());
  for (int k = 0; k < count; ++k) levels[static_cast<std::size_t>(k)] += gap * k;
  return levels;
}

// Writes means so that `order` (most preferred first) is the row's preference.
inline void assign_row(std::span<double> row, const std::vector<int>& order, double gap, Rng& rng) {
  const auto levels = jittered_levels(static_cast<int>(order.size()), gap, rng);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    row[static_cast<std::size_t>(order[pos])] = levels[levels.size() - 1 - pos];
  }
}

inline std::vector<int> random_order(int size, Rng& rng) {
  std::vector<int> order(static_cast<std::size_t>(size));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<int>(order));
  return order;
}

// Random order over [0, size) in which `pinned` precedes every index > pinned
// except that indices below `pinned` may appear anywhere.
inline std::vector<int> order_with_pinned_top(int pinned, int size, Rng& rng) {
  // Only indices < pinned may sit above it.
  const auto above = static_cast<int>(rng.below(static_cast<std::uint64_t>(pinned) + 1));
  std::vector<int> earlier(static_cast<std::size_t>(pinned));
  std::iota(earlier.begin(), earlier.end(), 0);
  rng.shuffle(std::span<int>(earlier));
  std::vector<int> order(earlier.begin(), earlier.begin() + above);
  order.push_back(pinned);
  std::vector<int> rest(earlier.begin() + above, earlier.end());
  for (int k = pinned + 1; k < size; ++k) rest.push_back(k);
  rng.shuffle(std::span<int>(rest));
  order.insert(order.end(), rest.begin(), rest.end());
  return order;
}

}  // namespace detail

/// Random market whose rows have strictly separated means.
inline Market generate_market(const MarketParams& params, Rng& rng) {
  detail::check_params(params);
  const int n = params.n;
  const int m = params.m;
  std::vector<double> agent_means(static_cast<std::size_t>(n * m));
  std::vector<double> firm_means(static_cast<std::size_t>(m * n));
  for (int a = 0; a < n; ++a) {
    detail::assign_row(std::span<double>(agent_means).subspan(static_cast<std::size_t>(a * m), m),
                       detail::random_order(m, rng), params.min_gap, rng);
  }
  for (int f = 0; f < m; ++f) {
    detail::assign_row(std::span<double>(firm_means).subspan(static_cast<std::size_t>(f * n), n),
                       detail::random_order(n, rng), params.min_gap, rng);
  }
  return Market(n, m, std::move(agent_means), std::move(firm_means), params.reward);
}

/// Random market in which (a_i, f_i) for i = 1..n are successive fixed pairs:
/// agent i ranks firm i above every firm j > i, and firm i ranks agent i above
/// every agent j > i. Firms beyond n have unconstrained lists.
inline Market generate_alpha_reducible(const MarketParams& params, Rng& rng) {
  detail::check_params(params);
  const int n = params.n;
  const int m = params.m;
  std::vector<double> agent_means(static_cast<std::size_t>(n * m));
  std::vector<double> firm_means(static_cast<std::size_t>(m * n));
  for (int a = 0; a < n; ++a) {
    detail::assign_row(std::span<double>(agent_means).subspan(static_cast<std::size_t>(a * m), m),
                       detail::order_with_pinned_top(a, m, rng), params.min_gap, rng);
  }
  for (int f = 0; f < m; ++f) {
    const auto order =
        f < n ? detail::order_with_pinned_top(f, n, rng) : detail::random_order(n, rng);
    detail::assign_row(std::span<double>(firm_means).subspan(static_cast<std::size_t>(f * n), n),
                       order, params.min_gap, rng);
  }
  return Market(n, m, std::move(agent_means), std::move(firm_means), params.reward);
}

/// Market whose ground-truth lists are the given ordinal tables. Means sit on
/// an evenly spaced grid from 0.9 (top) down to 0.1 (bottom).
inline Market market_from_orders(const PrefTable& agent_orders, const PrefTable& firm_orders,
                                 RewardModel reward = {}) {
  const int n = static_cast<int>(agent_orders.size());
  const int m = static_cast<int>(firm_orders.size());
  if (n < 1 || m < n) throw InputError("ordinal tables need 1 <= n <= m");
  auto grid = [](int pos, int len) { return len == 1 ? 0.9 : 0.9 - 0.8 * pos / (len - 1); };
  std::vector<double> agent_means(static_cast<std::size_t>(n * m));
  std::vector<double> firm_means(static_cast<std::size_t>(m * n));
  for (int a = 0; a < n; ++a) {
    const auto& order = agent_orders[static_cast<std::size_t>(a)];
    require_permutation(order, m, "agent order");
    for (int pos = 0; pos < m; ++pos) {
      agent_means[static_cast<std::size_t>(a * m + order[static_cast<std::size_t>(pos)])] =
          grid(pos, m);
    }
  }
  for (int f = 0; f < m; ++f) {
    const auto& order = firm_orders[static_cast<std::size_t>(f)];
    require_permutation(order, n, "firm order");
    for (int pos = 0; pos < n; ++pos) {
      firm_means[static_cast<std::size_t>(f * n + order[static_cast<std::size_t>(pos)])] =
          grid(pos, n);
    }
  }
  return Market(n, m, std::move(agent_means), std::move(firm_means), reward);
}

}  // namespace hintmatch
