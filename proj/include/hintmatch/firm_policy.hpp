#pragma once

#include <span>
#include <vector>

#include "hintmatch/market.hpp"

namespace hintmatch {

enum class FirmMode { certain, uncertain };

/// Rejection bookkeeping of one firm. Timestamps are round indices; 0 means never.
struct FirmState {
  std::vector<long> rejected_at;  // r_{f,a}: last round a was turned down while f hired
  long vacant_at = 0;             // c_f: last round f ended with no hire
  FirmMode mode = FirmMode::uncertain;
};

/// Hiring flag for a nonempty pool. An uncertain firm abstains when some agent
/// it now ranks above its best applicant was turned down after its last vacancy.
inline int strategic_rejection_decision(std::span<const int> applicants,
                                        std::span<const int> firm_list, const FirmState& state) {
  if (state.mode == FirmMode::certain || applicants.empty()) return 1;
  const auto rank = rank_of(firm_list);
  int best = applicants.front();
  for (int a : applicants) {
    if (rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(best)]) best = a;
  }
  for (int a : firm_list) {
    if (a == best) break;
    const long r = state.rejected_at[static_cast<std::size_t>(a)];
    if (r >= 1 && r >= state.vacant_at) return 0;
  }
  return 1;
}

inline void update_firm_rej_vars(FirmState& state, long t, int gamma,
                                 std::span<const int> applicants, int hired) {
  if (gamma == 1) {
    for (int a : applicants) {
      if (a != hired) state.rejected_at[static_cast<std::size_t>(a)] = t;
    }
  }
  if (hired == kUnmatched) state.vacant_at = t;
}

/// All firms of one simulation.
class FirmPolicy {
 public:
  FirmPolicy() = default;
  FirmPolicy(int m, int n, FirmMode mode, bool strategic = true) : strategic_(strategic) {
    states_.assign(static_cast<std::size_t>(m),
                   FirmState{std::vector<long>(static_cast<std::size_t>(n), 0), 0, mode});
  }

  int decide(int f, std::span<const int> applicants, std::span<const int> firm_list, long) const {
    if (!strategic_) return 1;
    return strategic_rejection_decision(applicants, firm_list, states_[static_cast<std::size_t>(f)]);
  }

  void update(int f, long t, int gamma, std::span<const int> applicants, int hired) {
    update_firm_rej_vars(states_[static_cast<std::size_t>(f)], t, gamma, applicants, hired);
  }

  const FirmState& state(int f) const { return states_[static_cast<std::size_t>(f)]; }
  int firms() const noexcept { return static_cast<int>(states_.size()); }
  bool strategic() const noexcept { return strategic_; }

 private:
  std::vector<FirmState> states_;
  bool strategic_ = true;
};

}  // namespace hintmatch
