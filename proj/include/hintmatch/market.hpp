#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hintmatch/error.hpp"
#include "hintmatch/rng.hpp"

namespace hintmatch {

// Indices are 0-based everywhere inside the library. External formats (CSV,
// JSON, CLI output) are 1-based.

inline constexpr int kUnmatched = -1;

enum class Side { agents, firms };

enum class RewardKind { bernoulli, gaussian, point };

inline std::string_view to_string(RewardKind kind) {
  switch (kind) {
    case RewardKind::bernoulli: return "bernoulli";
    case RewardKind::gaussian: return "gaussian";
    case RewardKind::point: return "point";
  }
  return "?";
}

inline RewardKind parse_reward_kind(std::string_view name) {
  if (name == "bernoulli") return RewardKind::bernoulli;
  if (name == "gaussian") return RewardKind::gaussian;
  if (name == "point") return RewardKind::point;
  throw InputError("unknown reward kind '" + std::string(name) +
                   "' (expected bernoulli, gaussian or point)");
}

/// Reward distribution family shared by every pair of a market. Each pair's
/// distribution is the family instantiated at the pair's mean parameter.
///
/// gaussian: N(mean, sigma^2) truncated to [0,1] by rejection. Its expectation
/// differs from the location parameter near the boundaries but is strictly
/// increasing in it, so preference orders are preserved; use expectation()
/// wherever a true mean is needed.
struct RewardModel {
  RewardKind kind = RewardKind::bernoulli;
  double sigma = 0.1;

  friend bool operator==(const RewardModel&, const RewardModel&) = default;
};

namespace detail {

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

// CDF of one pair's reward distribution on [0,1].
inline double reward_cdf(const RewardModel& model, double mean, double x) {
  if (x < 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  switch (model.kind) {
    case RewardKind::bernoulli: return 1.0 - mean;
    case RewardKind::point: return x >= mean ? 1.0 : 0.0;
    case RewardKind::gaussian: {
      const double lo = std_normal_cdf((0.0 - mean) / model.sigma);
      const double hi = std_normal_cdf((1.0 - mean) / model.sigma);
      return (std_normal_cdf((x - mean) / model.sigma) - lo) / (hi - lo);
    }
  }
  return 0.0;
}

}  // namespace detail

/// True expectation of a pair's reward given its mean parameter.
inline double expectation(const RewardModel& model, double mean) {
  if (model.kind != RewardKind::gaussian) return mean;
  const double alpha = (0.0 - mean) / model.sigma;
  const double beta = (1.0 - mean) / model.sigma;
  const double z = detail::std_normal_cdf(beta) - detail::std_normal_cdf(alpha);
  return mean + model.sigma * (detail::std_normal_pdf(alpha) - detail::std_normal_pdf(beta)) / z;
}

/// E[max(X, Y)] for independent X, Y from the model at means p and q.
///
/// Bernoulli and point mass are closed form. The truncated Gaussian uses
/// E[max] = integral over [0,1] of 1 - F_X(x) F_Y(x), by composite Simpson.
inline double expected_max(const RewardModel& model, double p, double q) {
  switch (model.kind) {
    case RewardKind::bernoulli: return p + (1.0 - p) * q;
    case RewardKind::point: return std::max(p, q);
    case RewardKind::gaussian: break;
  }
  constexpr int kIntervals = 2000;
  const double h = 1.0 / kIntervals;
  auto integrand = [&](double x) {
    return 1.0 - detail::reward_cdf(model, p, x) * detail::reward_cdf(model, q, x);
  };
  double sum = integrand(0.0) + integrand(1.0 - 1e-12);
  for (int k = 1; k < kIntervals; ++k) {
    sum += integrand(k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

/// One draw from the model at the given mean, always in [0,1].
inline double draw(const RewardModel& model, double mean, Rng& rng) {
  switch (model.kind) {
    case RewardKind::bernoulli: return rng.bernoulli(mean) ? 1.0 : 0.0;
    case RewardKind::point: return mean;
    case RewardKind::gaussian: {
      for (int attempt = 0; attempt < 1000; ++attempt) {
        const double x = mean + model.sigma * rng.normal();
        if (x >= 0.0 && x <= 1.0) return x;
      }
      return std::clamp(mean, 0.0, 1.0);
    }
  }
  return 0.0;
}

/// Preference order over the opposite side, most preferred first.
using PrefList = std::vector<int>;
using PrefTable = std::vector<PrefList>;

/// Throws InputError unless `list` is a permutation of [0, size).
inline void require_permutation(std::span<const int> list, int size, std::string_view what) {
  if (static_cast<int>(list.size()) != size) {
    throw InputError(std::string(what) + ": expected " + std::to_string(size) + " entries, got " +
                     std::to_string(list.size()));
  }
  std::vector<bool> seen(static_cast<std::size_t>(size), false);
  for (int v : list) {
    if (v < 0 || v >= size || seen[static_cast<std::size_t>(v)]) {
      throw InputError(std::string(what) + ": not a permutation");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

/// rank[i] = position of peer i in `list`.
inline std::vector<int> rank_of(std::span<const int> list) {
  std::vector<int> rank(list.size());
  for (std::size_t pos = 0; pos < list.size(); ++pos) {
    rank[static_cast<std::size_t>(list[pos])] = static_cast<int>(pos);
  }
  return rank;
}

/// Ground truth of a two-sided market: n agents, m firms (n <= m), and the
/// mean reward of every pair from both sides.
class Market {
 public:
  /// agent_means is n x m row-major, firm_means is m x n row-major.
  Market(int n, int m, std::vector<double> agent_means, std::vector<double> firm_means,
         RewardModel reward = {})
      : n_(n), m_(m), agent_means_(std::move(agent_means)), firm_means_(std::move(firm_means)),
        reward_(reward) {
    validate();
  }

  int agents() const noexcept { return n_; }
  int firms() const noexcept { return m_; }
  const RewardModel& reward_model() const noexcept { return reward_; }

  double agent_mean(int a, int f) const { return agent_means_[idx(a, f, m_)]; }
  double firm_mean(int f, int a) const { return firm_means_[idx(f, a, n_)]; }

  std::span<const double> agent_row(int a) const {
    return {agent_means_.data() + idx(a, 0, m_), static_cast<std::size_t>(m_)};
  }
  std::span<const double> firm_row(int f) const {
    return {firm_means_.data() + idx(f, 0, n_), static_cast<std::size_t>(n_)};
  }

  const std::vector<double>& agent_means() const noexcept { return agent_means_; }
  const std::vector<double>& firm_means() const noexcept { return firm_means_; }

  /// Expected reward of agent a when matched with firm f.
  double agent_utility(int a, int f) const { return expectation(reward_, agent_mean(a, f)); }

  double sample_agent(int a, int f, Rng& rng) const { return draw(reward_, agent_mean(a, f), rng); }
  double sample_firm(int f, int a, Rng& rng) const { return draw(reward_, firm_mean(f, a), rng); }

  friend bool operator==(const Market&, const Market&) = default;

 private:
  static std::size_t idx(int row, int col, int width) {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(col);
  }

  static void check_row(std::span<const double> row, std::string_view what, int index) {
    for (double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InputError(std::string(what) + " " + std::to_string(index + 1) +
                         ": mean outside [0,1]");
      }
    }
    std::vector<double> sorted(row.begin(), row.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InputError(std::string(what) + " " + std::to_string(index + 1) +
                       ": duplicate means (preferences must be strict)");
    }
  }

  void validate() const {
    if (n_ < 1 || m_ < n_) {
      throw InputError("market needs 1 <= n <= m, got n=" + std::to_string(n_) +
                       " m=" + std::to_string(m_));
    }
    if (agent_means_.size() != idx(n_, 0, m_) || firm_means_.size() != idx(m_, 0, n_)) {
      throw InputError("mean matrices do not match n x m / m x n");
    }
    if (reward_.kind == RewardKind::gaussian && !(reward_.sigma > 0.0)) {
      throw InputError("gaussian reward model needs sigma > 0");
    }
    for (int a = 0; a < n_; ++a) check_row(agent_row(a), "agent", a);
    for (int f = 0; f < m_; ++f) check_row(firm_row(f), "firm", f);
  }

  int n_;
  int m_;
  std::vector<double> agent_means_;
  std::vector<double> firm_means_;
  RewardModel reward_;
};

/// Orders peers by strictly decreasing mean.
inline PrefList sort_by_means(std::span<const double> means) {
  PrefList order(means.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return means[static_cast<std::size_t>(x)] > means[static_cast<std::size_t>(y)];
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (means[static_cast<std::size_t>(order[k])] == means[static_cast<std::size_t>(order[k - 1])]) {
      throw InputError("duplicate means: preferences are not strict");
    }
  }
  return order;
}

struct GroundTruth {
  PrefTable agents;
  PrefTable firms;
};

inline GroundTruth ground_truth_prefs(const Market& market) {
  GroundTruth truth;
  for (int a = 0; a < market.agents(); ++a) truth.agents.push_back(sort_by_means(market.agent_row(a)));
  for (int f = 0; f < market.firms(); ++f) truth.firms.push_back(sort_by_means(market.firm_row(f)));
  return truth;
}

/// One-to-one assignment of agents to firms. firm_of is the source of truth;
/// the firm-side view is derived.
class Matching {
 public:
  Matching() = default;
  Matching(int n, int m) : firm_of_(static_cast<std::size_t>(n), kUnmatched), m_(m) {}

  /// Throws InputError if two agents share a firm or an index is out of range.
  Matching(std::vector<int> firm_of, int m) : firm_of_(std::move(firm_of)), m_(m) {
    std::vector<bool> taken(static_cast<std::size_t>(m), false);
    for (int f : firm_of_) {
      if (f == kUnmatched) continue;
      if (f < 0 || f >= m || taken[static_cast<std::size_t>(f)]) {
        throw InputError("matching is not injective");
      }
      taken[static_cast<std::size_t>(f)] = true;
    }
  }

  int agents() const noexcept { return static_cast<int>(firm_of_.size()); }
  int firms() const noexcept { return m_; }

  int firm_of(int a) const { return firm_of_[static_cast<std::size_t>(a)]; }
  const std::vector<int>& agent_view() const noexcept { return firm_of_; }

  std::vector<int> firm_view() const {
    std::vector<int> agent_of(static_cast<std::size_t>(m_), kUnmatched);
    for (int a = 0; a < agents(); ++a) {
      if (firm_of(a) != kUnmatched) agent_of[static_cast<std::size_t>(firm_of(a))] = a;
    }
    return agent_of;
  }

  /// Every agent holds a firm.
  bool perfect() const {
    return std::none_of(firm_of_.begin(), firm_of_.end(), [](int f) { return f == kUnmatched; });
  }

  void assign(int a, int f) { firm_of_[static_cast<std::size_t>(a)] = f; }

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<int> firm_of_;
  int m_ = 0;
};

}  // namespace hintmatch
