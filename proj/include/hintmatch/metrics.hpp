#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "hintmatch/engine.hpp"
#include "hintmatch/estimation.hpp"
#include "hintmatch/stable.hpp"

namespace hintmatch {

/// Expected utility of every agent's best and worst stable partner.
struct Baselines {
  std::vector<double> optimal;
  std::vector<double> pessimal;
};

inline Baselines regret_baselines(const Market& market, const StableExtremes& extremes) {
  Baselines b;
  for (int a = 0; a < market.agents(); ++a) {
    b.optimal.push_back(market.agent_utility(a, extremes.agent_optimal.firm_of(a)));
    b.pessimal.push_back(market.agent_utility(a, extremes.agent_pessimal.firm_of(a)));
  }
  return b;
}

inline Baselines regret_baselines(const Market& market) {
  return regret_baselines(market, stable_extremes(market));
}

/// Cumulative optimal and pessimal regret per agent and round.
class RegretSeries {
 public:
  RegretSeries() = default;
  explicit RegretSeries(Baselines baselines) : baselines_(std::move(baselines)) {
    totals_opt_.assign(baselines_.optimal.size(), 0.0);
    totals_pes_.assign(baselines_.optimal.size(), 0.0);
  }

  /// Adds one round; `gains` holds each agent's reward (or expected reward) this round.
  void update(std::span<const double> gains) {
    for (std::size_t a = 0; a < totals_opt_.size(); ++a) {
      totals_opt_[a] += baselines_.optimal[a] - gains[a];
      totals_pes_[a] += baselines_.pessimal[a] - gains[a];
      optimal_.push_back(totals_opt_[a]);
      pessimal_.push_back(totals_pes_[a]);
    }
    ++rounds_;
  }

  int agents() const noexcept { return static_cast<int>(totals_opt_.size()); }
  long rounds() const noexcept { return rounds_; }
  /// Cumulative regret of agent a after round t (1-based).
  double optimal(int a, long t) const { return optimal_[index(a, t)]; }
  double pessimal(int a, long t) const { return pessimal_[index(a, t)]; }
  const Baselines& baselines() const noexcept { return baselines_; }

 private:
  std::size_t index(int a, long t) const {
    if (t < 1 || t > rounds_) throw ParameterError("round outside the recorded series");
    return static_cast<std::size_t>(t - 1) * totals_opt_.size() + static_cast<std::size_t>(a);
  }

  Baselines baselines_;
  std::vector<double> totals_opt_;
  std::vector<double> totals_pes_;
  std::vector<double> optimal_;
  std::vector<double> pessimal_;
  long rounds_ = 0;
};

/// Recorder keeping two regret series: one on realized rewards and one on the
/// expected utility of the firm each agent was matched to.
class RegretTracker {
 public:
  RegretTracker(const Market& market, Baselines baselines)
      : market_(&market), realized_(baselines), expected_(std::move(baselines)) {}

  void operator()(const RoundOutcome& outcome) {
    realized_.update(outcome.rewards);
    gains_.assign(outcome.rewards.size(), 0.0);
    for (int a = 0; a < static_cast<int>(gains_.size()); ++a) {
      const int f = outcome.matching.firm_of(a);
      if (f != kUnmatched) gains_[static_cast<std::size_t>(a)] = market_->agent_utility(a, f);
    }
    expected_.update(gains_);
  }

  const RegretSeries& realized() const noexcept { return realized_; }
  const RegretSeries& expected() const noexcept { return expected_; }

 private:
  const Market* market_;
  RegretSeries realized_;
  RegretSeries expected_;
  std::vector<double> gains_;
};

/// Reward gaps to the best (bar) and worst (underbar) stable partner.
struct GapTable {
  int n = 0;
  int m = 0;
  std::vector<double> agent_opt;   // n x m
  std::vector<double> agent_pes;   // n x m
  std::vector<double> firm_opt;    // m x n
  std::vector<double> firm_pes;    // m x n
  std::vector<double> agent_min;   // per agent, smallest optimal gap to a non-baseline firm
  std::vector<double> firm_min;    // per firm, smallest optimal gap to a non-baseline agent
};

/// Firms with no stable partner use 0 (staying vacant) as their baseline.
inline GapTable gap_table(const Market& market, const StableSet& stable) {
  const int n = market.agents();
  const int m = market.firms();
  GapTable g;
  g.n = n;
  g.m = m;
  auto min_positive = [](std::span<const double> row, int skip) {
    double best = 0.0;
    bool any = false;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (static_cast<int>(k) == skip) continue;
      if (!any || row[k] < best) best = row[k];
      any = true;
    }
    return best;
  };
  for (int a = 0; a < n; ++a) {
    const int best = stable.best_firm[static_cast<std::size_t>(a)];
    const int worst = stable.worst_firm[static_cast<std::size_t>(a)];
    for (int f = 0; f < m; ++f) {
      const double u = market.agent_utility(a, f);
      g.agent_opt.push_back(std::abs(market.agent_utility(a, best) - u));
      g.agent_pes.push_back(std::abs(market.agent_utility(a, worst) - u));
    }
    g.agent_min.push_back(
        min_positive(std::span<const double>(g.agent_opt).subspan(static_cast<std::size_t>(a * m), m), best));
  }
  for (int f = 0; f < m; ++f) {
    const int best = stable.best_agent[static_cast<std::size_t>(f)];
    const int worst = stable.worst_agent[static_cast<std::size_t>(f)];
    const auto firm_u = [&](int a) {
      return expectation(market.reward_model(), market.firm_mean(f, a));
    };
    const double ub = best == kUnmatched ? 0.0 : firm_u(best);
    const double uw = worst == kUnmatched ? 0.0 : firm_u(worst);
    for (int a = 0; a < n; ++a) {
      g.firm_opt.push_back(std::abs(ub - firm_u(a)));
      g.firm_pes.push_back(std::abs(uw - firm_u(a)));
    }
    g.firm_min.push_back(
        min_positive(std::span<const double>(g.firm_opt).subspan(static_cast<std::size_t>(f * n), n), best));
  }
  return g;
}

/// Smallest t from which the matching stays fixed and perfect through the end of the log.
inline std::optional<long> convergence_round(std::span<const Matching> log) {
  if (log.empty() || !log.back().perfect()) return std::nullopt;
  std::size_t k = log.size() - 1;
  while (k > 0 && log[k - 1] == log.back()) --k;
  return static_cast<long>(k) + 1;
}

/// Streaming form of convergence_round.
class ConvergenceTracker {
 public:
  void operator()(const RoundOutcome& outcome) {
    const bool same = has_last_ && outcome.matching == last_;
    if (!same) since_ = outcome.t;
    last_ = outcome.matching;
    has_last_ = true;
  }

  std::optional<long> round() const {
    if (!has_last_ || !last_.perfect()) return std::nullopt;
    return since_;
  }
  const Matching& limit() const noexcept { return last_; }

 private:
  Matching last_;
  bool has_last_ = false;
  long since_ = 0;
};

struct PlateauResult {
  double early = 0.0;
  double late = 0.0;
  double ratio = 1.0;
  bool nonpositive_denominator = false;
};

/// late / early of a cumulative series (1-based rounds). A non-positive early
/// value yields ratio 1 with the flag set; callers then judge late - early.
inline PlateauResult plateau_ratio(std::span<const double> series, long t_early, long t_late) {
  if (!(t_early >= 1 && t_early < t_late && t_late <= static_cast<long>(series.size()))) {
    throw ParameterError("plateau checkpoints need 1 <= t_early < t_late <= horizon");
  }
  PlateauResult r;
  r.early = series[static_cast<std::size_t>(t_early - 1)];
  r.late = series[static_cast<std::size_t>(t_late - 1)];
  if (r.early > 0.0) {
    r.ratio = r.late / r.early;
  } else {
    r.nonpositive_denominator = true;
  }
  return r;
}

/// Passes when late <= max_ratio * early, or, for a non-positive early value,
/// when the series grew by at most `slack`.
inline bool plateau_holds(const PlateauResult& r, double max_ratio, double slack) {
  if (r.nonpositive_denominator) return r.late - r.early <= slack;
  return r.ratio <= max_ratio;
}

/// Counts, per tracked pair, the rounds in which the owner's estimated list is
/// not valid with respect to its target. Agents track their best stable
/// partner and firms their worst stable agent.
class InvalidityCounter {
 public:
  InvalidityCounter(const Market& market, const StableSet& stable, long split)
      : truth_(ground_truth_prefs(market)),
        agent_targets_(stable.best_firm),
        firm_targets_(stable.worst_agent),
        split_(split) {
    first_.assign(agent_targets_.size() + firm_targets_.size(), 0);
    second_ = first_;
  }

  /// Call with the estimators the round's decisions were based on.
  void observe(long t, const EstimatorState& agents, const EstimatorState& firms) {
    auto& bucket = t <= split_ ? first_ : second_;
    all_valid_ = true;
    for (std::size_t a = 0; a < agent_targets_.size(); ++a) {
      const auto list = estimated_pref_list(agents, static_cast<int>(a));
      if (!validity(list, truth_.agents[a], agent_targets_[a]).valid) {
        ++bucket[a];
        all_valid_ = false;
      }
    }
    for (std::size_t f = 0; f < firm_targets_.size(); ++f) {
      if (firm_targets_[f] == kUnmatched) continue;
      const auto list = estimated_pref_list(firms, static_cast<int>(f));
      if (!validity(list, truth_.firms[f], firm_targets_[f]).valid) {
        ++bucket[agent_targets_.size() + f];
        all_valid_ = false;
      }
    }
  }

  bool last_all_valid() const noexcept { return all_valid_; }
  /// Entries 0..n-1 are agents, n..n+m-1 firms.
  const std::vector<long>& first_half() const noexcept { return first_; }
  const std::vector<long>& second_half() const noexcept { return second_; }
  long total_first() const { return sum(first_); }
  long total_second() const { return sum(second_); }

 private:
  static long sum(const std::vector<long>& v) {
    long s = 0;
    for (long x : v) s += x;
    return s;
  }

  GroundTruth truth_;
  std::vector<int> agent_targets_;
  std::vector<int> firm_targets_;
  long split_;
  std::vector<long> first_;
  std::vector<long> second_;
  bool all_valid_ = true;
};

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

/// Sample mean and standard error, summed in index order.
inline MeanSe mean_and_se(std::span<const double> values) {
  MeanSe out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.se = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
  return out;
}

}  // namespace hintmatch
