#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "hintmatch/market.hpp"
#include "hintmatch/rng.hpp"

namespace hintmatch {

inline constexpr double kDefaultEpsilon = 0.1;

/// Running mean and population variance (Welford).
class ArmState {
 public:
  void record(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }
  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return count_ == 0 ? 0.0 : m2_ / static_cast<double>(count_); }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// mean + epsilon * variance; +inf for an arm never observed, so it ranks first.
inline double ucb_prime(const ArmState& arm, double epsilon = kDefaultEpsilon) {
  if (arm.count() == 0) return std::numeric_limits<double>::infinity();
  return arm.mean() + epsilon * arm.variance();
}

/// Arms by decreasing UCB' index, ties to the lower index.
inline std::vector<int> ucb_ranking(std::span<const ArmState> arms, double epsilon) {
  std::vector<int> order(arms.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> key(arms.size());
  for (std::size_t k = 0; k < arms.size(); ++k) key[k] = ucb_prime(arms[k], epsilon);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return key[static_cast<std::size_t>(x)] > key[static_cast<std::size_t>(y)];
  });
  return order;
}

/// E[max(X, Y)] for independent Bernoulli(p), Bernoulli(q).
inline double bernoulli_max_expectation(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
    throw ParameterError("Bernoulli parameters must lie in [0,1]");
  }
  return p + (1.0 - p) * q;
}

/// One bandit arm set with known means; the simulator side of a hinted run.
struct ArmBank {
  std::vector<double> means;
  RewardModel model{};
};

struct ProbeStep {
  long t = 0;
  int round_robin = 0;
  int first = 0;   // probe ranked i
  int second = 0;  // probe ranked i + 1
  int pulled = 0;
  double reward = 0.0;
};

/// One round of (Extended) AllProbe: observe the round-robin arm and the arms
/// ranked `rank` and `rank`+1 (1-based) by UCB', then pull the probe with the
/// larger realized draw. Ties go to the higher-ranked probe.
inline ProbeStep eap_step(std::vector<ArmState>& arms, int rank, long t, const ArmBank& bank,
                          double epsilon, Rng& rng) {
  const int m = static_cast<int>(arms.size());
  if (m < 2) throw ParameterError("probing needs at least two arms");
  if (rank < 1 || rank > m - 1) throw ParameterError("target rank must lie in 1..m-1");
  const auto order = ucb_ranking(arms, epsilon);
  ProbeStep step;
  step.t = t;
  step.round_robin = static_cast<int>(t % m);
  step.first = order[static_cast<std::size_t>(rank - 1)];
  step.second = order[static_cast<std::size_t>(rank)];
  auto sample = [&](int arm) { return draw(bank.model, bank.means[static_cast<std::size_t>(arm)], rng); };
  const double x_rr = sample(step.round_robin);
  const double x1 = sample(step.first);
  const double x2 = sample(step.second);
  arms[static_cast<std::size_t>(step.round_robin)].record(x_rr);
  arms[static_cast<std::size_t>(step.first)].record(x1);
  arms[static_cast<std::size_t>(step.second)].record(x2);
  step.pulled = x2 > x1 ? step.second : step.first;
  step.reward = std::max(x1, x2);
  return step;
}

inline ProbeStep allprobe_step(std::vector<ArmState>& arms, long t, const ArmBank& bank,
                               double epsilon, Rng& rng) {
  return eap_step(arms, 1, t, bank, epsilon, rng);
}

/// AllProbe ranking by empirical means alone.
inline ProbeStep apem_step(std::vector<ArmState>& arms, long t, const ArmBank& bank, Rng& rng) {
  return eap_step(arms, 1, t, bank, 0.0, rng);
}

/// Cumulative regret against the arm of true rank `rank`:
/// sum of max{0, u_(rank) - E[max of the two probed arms]}.
inline std::vector<double> hinted_regret(std::span<const ProbeStep> trajectory, const ArmBank& bank,
                                         int rank = 1) {
  std::vector<double> utility(bank.means.size());
  for (std::size_t k = 0; k < utility.size(); ++k) utility[k] = expectation(bank.model, bank.means[k]);
  auto sorted = utility;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  if (rank < 1 || rank > static_cast<int>(sorted.size())) throw ParameterError("rank out of range");
  const double target = sorted[static_cast<std::size_t>(rank - 1)];

  std::vector<double> cumulative;
  cumulative.reserve(trajectory.size());
  double total = 0.0;
  for (const auto& step : trajectory) {
    const double p = bank.means[static_cast<std::size_t>(step.first)];
    const double q = bank.means[static_cast<std::size_t>(step.second)];
    const double best = bank.model.kind == RewardKind::bernoulli ? bernoulli_max_expectation(p, q)
                                                                 : expected_max(bank.model, p, q);
    total += std::max(0.0, target - best);
    cumulative.push_back(total);
  }
  return cumulative;
}

enum class ProbeAlgorithm { allprobe, eap, apem };

/// Plays T rounds of one probing algorithm and returns the trajectory.
inline std::vector<ProbeStep> run_probe_bandit(ProbeAlgorithm algorithm, const ArmBank& bank,
                                               long T, std::uint64_t seed,
                                               double epsilon = kDefaultEpsilon, int rank = 1) {
  if (T < 1) throw ParameterError("horizon must be at least one round");
  Rng rng(seed);
  std::vector<ArmState> arms(bank.means.size());
  std::vector<ProbeStep> trajectory;
  trajectory.reserve(static_cast<std::size_t>(T));
  for (long t = 1; t <= T; ++t) {
    switch (algorithm) {
      case ProbeAlgorithm::allprobe: trajectory.push_back(allprobe_step(arms, t, bank, epsilon, rng)); break;
      case ProbeAlgorithm::eap: trajectory.push_back(eap_step(arms, rank, t, bank, epsilon, rng)); break;
      case ProbeAlgorithm::apem: trajectory.push_back(apem_step(arms, t, bank, rng)); break;
    }
  }
  return trajectory;
}

/// Arm pulled most often over rounds [from, to] (1-based, inclusive); ties to the lower index.
inline int most_pulled(std::span<const ProbeStep> trajectory, long from, long to, int arms) {
  std::vector<long> pulls(static_cast<std::size_t>(arms), 0);
  for (const auto& step : trajectory) {
    if (step.t >= from && step.t <= to) ++pulls[static_cast<std::size_t>(step.pulled)];
  }
  return static_cast<int>(std::max_element(pulls.begin(), pulls.end()) - pulls.begin());
}

}  // namespace hintmatch
