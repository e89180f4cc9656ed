#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "hintmatch/market.hpp"

namespace hintmatch {

/// Running sums and counts of interview signals, one row per owner (agent or
/// firm), one column per peer on the opposite side.
///
/// In oracle mode the estimator reports the ground-truth means with an
/// unbounded count and ignores recorded observations; this is how firms that
/// know their preferences are modelled.
class EstimatorState {
 public:
  EstimatorState() = default;

  EstimatorState(int owners, int peers)
      : owners_(owners), peers_(peers), sums_(cells(), 0.0), counts_(cells(), 0) {}

  static EstimatorState oracle(int owners, int peers, std::vector<double> truth) {
    EstimatorState est(owners, peers);
    est.truth_ = std::move(truth);
    return est;
  }

  int owners() const noexcept { return owners_; }
  int peers() const noexcept { return peers_; }
  bool is_oracle() const noexcept { return !truth_.empty(); }

  void record(int owner, int peer, double value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw InputError("observation " + std::to_string(value) + " outside [0,1]");
    }
    if (is_oracle()) return;
    sums_[at(owner, peer)] += value;
    counts_[at(owner, peer)] += 1;
  }

  std::uint64_t count(int owner, int peer) const {
    return is_oracle() ? std::numeric_limits<std::uint64_t>::max() : counts_[at(owner, peer)];
  }

  std::optional<double> mean(int owner, int peer) const {
    if (is_oracle()) return truth_[at(owner, peer)];
    const auto c = counts_[at(owner, peer)];
    if (c == 0) return std::nullopt;
    return sums_[at(owner, peer)] / static_cast<double>(c);
  }

 private:
  std::size_t cells() const {
    return static_cast<std::size_t>(owners_) * static_cast<std::size_t>(peers_);
  }
  std::size_t at(int owner, int peer) const {
    return static_cast<std::size_t>(owner) * static_cast<std::size_t>(peers_) +
           static_cast<std::size_t>(peer);
  }

  int owners_ = 0;
  int peers_ = 0;
  std::vector<double> sums_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> truth_;
};

inline EstimatorState agent_estimator(const Market& market, bool oracle) {
  return oracle ? EstimatorState::oracle(market.agents(), market.firms(), market.agent_means())
                : EstimatorState(market.agents(), market.firms());
}

inline EstimatorState firm_estimator(const Market& market, bool oracle) {
  return oracle ? EstimatorState::oracle(market.firms(), market.agents(), market.firm_means())
                : EstimatorState(market.firms(), market.agents());
}

/// Owner's estimated preference list. Never-observed peers come first, then
/// observed peers by decreasing empirical mean; ties go to the lower index.
inline PrefList estimated_pref_list(const EstimatorState& est, int owner) {
  PrefList order(static_cast<std::size_t>(est.peers()));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> key(order.size());
  for (int p = 0; p < est.peers(); ++p) {
    const auto mu = est.mean(owner, p);
    key[static_cast<std::size_t>(p)] = mu ? *mu : std::numeric_limits<double>::infinity();
  }
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return key[static_cast<std::size_t>(x)] > key[static_cast<std::size_t>(y)];
  });
  return order;
}

inline PrefTable estimated_pref_table(const EstimatorState& est) {
  PrefTable table;
  table.reserve(static_cast<std::size_t>(est.owners()));
  for (int o = 0; o < est.owners(); ++o) table.push_back(estimated_pref_list(est, o));
  return table;
}

struct ValidityReport {
  bool valid = true;
  std::vector<int> offending;  // ranked above target in the estimate but below it in truth
};

/// The estimated list is valid w.r.t. target when every peer it ranks above
/// the target is also above the target in truth.
inline ValidityReport validity(std::span<const int> estimated, std::span<const int> truth,
                               int target) {
  const auto true_rank = rank_of(truth);
  const int target_rank = true_rank[static_cast<std::size_t>(target)];
  ValidityReport report;
  for (int peer : estimated) {
    if (peer == target) break;
    if (true_rank[static_cast<std::size_t>(peer)] > target_rank) report.offending.push_back(peer);
  }
  report.valid = report.offending.empty();
  return report;
}

/// First k entries agree as an ordered sequence.
inline bool topk_aligned(std::span<const int> estimated, std::span<const int> truth, int k) {
  if (k < 1 || k > static_cast<int>(truth.size()) || estimated.size() != truth.size()) {
    throw ParameterError("top-k alignment needs 1 <= k <= list length");
  }
  return std::equal(estimated.begin(), estimated.begin() + k, truth.begin());
}

}  // namespace hintmatch
