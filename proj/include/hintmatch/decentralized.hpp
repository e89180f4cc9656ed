#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "hintmatch/engine.hpp"

namespace hintmatch {

/// What a decentralized agent sees before deciding: its own estimated list.
struct AgentObservation {
  long t;
  int n;
  int m;
  const PrefList& estimated;
};

/// What it sees afterwards: its own action and match plus the broadcast sets.
struct AgentFeedback {
  long t;
  const AgentAction& action;
  int matched;
  std::span<const std::uint8_t> vacant;
  std::span<const std::uint8_t> changed;
};

namespace detail {

// First firm of `list` whose flag is set, or kUnmatched.
inline int first_allowed(const PrefList& list, const std::vector<std::uint8_t>& allowed) {
  for (int f : list) {
    if (allowed[static_cast<std::size_t>(f)]) return f;
  }
  return kUnmatched;
}

}  // namespace detail

/// B_a(t) of the coordinated learner: firms whose last rejection predates t^GS.
inline std::vector<int> drr_candidate_set(std::span<const long> rejected_at, long t_gs) {
  std::vector<int> out;
  for (std::size_t f = 0; f < rejected_at.size(); ++f) {
    if (rejected_at[f] < t_gs) out.push_back(static_cast<int>(f));
  }
  return out;
}

/// B'_a(t) of the coordination-free learner: never rejected, or showing a
/// hiring change in a round after the rejection.
inline std::vector<int> ancdrr_candidate_set(std::span<const long> rejected_at,
                                             std::span<const long> last_change) {
  std::vector<int> out;
  for (std::size_t f = 0; f < rejected_at.size(); ++f) {
    if (rejected_at[f] == 0 || last_change[f] > rejected_at[f]) out.push_back(static_cast<int>(f));
  }
  return out;
}

/// Coordinated learner driven by vacancy feedback. Time is split into
/// updating phases of 3n^2 rounds (distributed deferred acceptance on a frozen
/// snapshot of the estimates) and committing phases that last until some
/// agent signals a restart by leaving its firm vacant.
class DrrAgent {
 public:
  enum Trigger : unsigned { kInconsistency = 1u, kStrategicRejection = 2u, kVacancy = 4u };
  static constexpr int kBudget = 2;

  DrrAgent(int index, int n, int m)
      : index_(index),
        n_(n),
        m_(m),
        phase_length_(3L * n * n),
        rejected_at_(static_cast<std::size_t>(m), 0),
        frozen_(static_cast<std::size_t>(m), 1) {}

  /// B_a(t): firms that have not turned the agent down since t^GS.
  std::vector<std::uint8_t> candidate_flags() const {
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(m_));
    for (int f = 0; f < m_; ++f) {
      flags[static_cast<std::size_t>(f)] = rejected_at_[static_cast<std::size_t>(f)] < t_gs_;
    }
    return flags;
  }
  std::vector<int> candidate_set() const { return drr_candidate_set(rejected_at_, t_gs_); }

  AgentAction decide(const AgentObservation& obs, Rng&) {
    const long t = obs.t;
    const int rr = round_robin_firm(index_, t, m_);
    if (t == t_gs_) snapshot_ = obs.estimated;
    updating_ = t < t_gs_ + phase_length_;
    pending_ = 0;
    if (updating_) {
      const int f = detail::first_allowed(snapshot_, candidate_flags());
      if (f == kUnmatched) throw ProtocolError(t, "empty candidate set in updating phase");
      return {{f, rr}, {f}};
    }
    if (t == t_gs_ + phase_length_) {
      frozen_ = candidate_flags();
      committed_ = detail::first_allowed(snapshot_, frozen_);
      if (committed_ == kUnmatched) throw ProtocolError(t, "empty candidate set at commit");
    }
    const int current = detail::first_allowed(obs.estimated, frozen_);
    if (current != committed_) pending_ |= kInconsistency;
    if (rejected_since_gs_) pending_ |= kStrategicRejection;
    if (pending_) return {{current, rr}, {}};
    return {{current, rr}, {current}};
  }

  void observe(const AgentFeedback& fb) {
    if (!fb.action.applications.empty() && fb.matched == kUnmatched) {
      const int f = fb.action.applications.front();
      if (fb.vacant[static_cast<std::size_t>(f)]) {
        rejected_since_gs_ = true;
      } else {
        rejected_at_[static_cast<std::size_t>(f)] = fb.t;
      }
    }
    last_triggers_ = 0;
    if (updating_) return;
    unsigned triggers = pending_;
    const auto vacancies = std::count(fb.vacant.begin(), fb.vacant.end(), std::uint8_t{1});
    if (vacancies > m_ - n_) triggers |= kVacancy;
    if (triggers) {
      last_triggers_ = triggers;
      t_gs_ = fb.t + 1;
      std::fill(rejected_at_.begin(), rejected_at_.end(), 0);
      rejected_since_gs_ = false;
    }
  }

  long t_gs() const noexcept { return t_gs_; }
  long phase_length() const noexcept { return phase_length_; }
  bool updating() const noexcept { return updating_; }
  int committed() const noexcept { return committed_; }
  const PrefList& snapshot() const noexcept { return snapshot_; }
  /// Triggers that ended the committing phase in the last observed round.
  unsigned last_triggers() const noexcept { return last_triggers_; }
  std::span<const long> rejections() const noexcept { return rejected_at_; }

 private:
  int index_;
  int n_;
  int m_;
  long phase_length_;
  long t_gs_ = 1;
  bool updating_ = true;
  bool rejected_since_gs_ = false;
  unsigned pending_ = 0;
  unsigned last_triggers_ = 0;
  int committed_ = kUnmatched;
  PrefList snapshot_;
  std::vector<long> rejected_at_;
  std::vector<std::uint8_t> frozen_;
};

/// Coordination-free learner driven by anonymous hiring-change feedback. A
/// firm that turned the agent down becomes a candidate again once it shows a
/// hiring change in a later round.
class AncdrrAgent {
 public:
  static constexpr int kBudget = 2;

  AncdrrAgent(int index, int, int m)
      : index_(index),
        m_(m),
        rejected_at_(static_cast<std::size_t>(m), 0),
        last_change_(static_cast<std::size_t>(m), 0) {}

  std::vector<std::uint8_t> candidate_flags() const {
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(m_));
    for (std::size_t f = 0; f < flags.size(); ++f) {
      flags[f] = rejected_at_[f] == 0 || last_change_[f] > rejected_at_[f];
    }
    return flags;
  }
  std::vector<int> candidate_set() const { return ancdrr_candidate_set(rejected_at_, last_change_); }

  AgentAction decide(const AgentObservation& obs, Rng&) {
    const int f = target(obs);
    previous_ = f;
    return {{f, round_robin_firm(index_, obs.t, m_)}, {f}};
  }

  void observe(const AgentFeedback& fb) {
    note_changes(fb);
    if (!fb.action.applications.empty() && fb.matched == kUnmatched) {
      const int f = fb.action.applications.front();
      if (!fb.vacant[static_cast<std::size_t>(f)]) rejected_at_[static_cast<std::size_t>(f)] = fb.t;
    }
  }

  long anomalies() const noexcept { return anomalies_; }
  std::span<const long> rejections() const noexcept { return rejected_at_; }
  std::span<const long> last_changes() const noexcept { return last_change_; }

 protected:
  int target(const AgentObservation& obs) {
    const int f = detail::first_allowed(obs.estimated, candidate_flags());
    if (f != kUnmatched) return f;
    ++anomalies_;
    return previous_ != kUnmatched ? previous_ : obs.estimated.front();
  }

  void note_changes(const AgentFeedback& fb) {
    for (std::size_t f = 0; f < fb.changed.size(); ++f) {
      if (fb.changed[f]) last_change_[f] = fb.t;
    }
  }

  int index_;
  int m_;
  int previous_ = kUnmatched;
  long anomalies_ = 0;
  std::vector<long> rejected_at_;
  std::vector<long> last_change_;
};

/// ancdrr with a third interview: with probability lambda the agent applies
/// to both its target and its current anchor, preferring the target.
class EancdrrAgent : public AncdrrAgent {
 public:
  static constexpr int kBudget = 3;

  EancdrrAgent(int index, int n, int m, double lambda) : AncdrrAgent(index, n, m), lambda_(lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("lambda must lie in (0,1)");
  }

  AgentAction decide(const AgentObservation& obs, Rng& rng) {
    const int f = target(obs);
    previous_ = f;
    const int rr = round_robin_firm(index_, obs.t, m_);
    if (anchor_ == kUnmatched) return {{f, rr}, {f}};
    const bool move = rng.bernoulli(lambda_);
    if (move && f != anchor_) return {{f, anchor_, rr}, {f, anchor_}};
    return {{f, anchor_, rr}, {anchor_}};
  }

  void observe(const AgentFeedback& fb) {
    note_changes(fb);
    for (int f : fb.action.applications) {
      if (f == fb.matched) break;
      if (!fb.vacant[static_cast<std::size_t>(f)]) rejected_at_[static_cast<std::size_t>(f)] = fb.t;
    }
    if (fb.matched != kUnmatched) anchor_ = fb.matched;
  }

  int anchor() const noexcept { return anchor_; }
  double lambda() const noexcept { return lambda_; }

 private:
  double lambda_;
  int anchor_ = kUnmatched;
};

/// One drr phase as seen from the outside.
struct PhaseRecord {
  int index = 0;
  long t_gs = 1;
  unsigned triggers = 0;          // union of the triggers that started it; 0 for the first
  bool complete = false;          // the updating part ran to its end within the horizon
  Matching final_updating;        // matching in the last updating round
  std::vector<int> committed;     // per agent, empty until committing starts
};

/// Runs one private agent object per market agent. Each agent receives only
/// its own estimated list, its own action and match, and the broadcast sets.
template <class Agent>
class Decentralized {
 public:
  explicit Decentralized(std::vector<Agent> agents) : agents_(std::move(agents)) {
    if constexpr (kIsDrr) phases_.push_back(PhaseRecord{});
  }

  int interview_budget() const noexcept { return Agent::kBudget; }

  void plan(const PlanContext& ctx, std::vector<AgentAction>& actions, Rng& rng) {
    for (int a = 0; a < ctx.n; ++a) {
      const auto list = estimated_pref_list(ctx.agent_estimates, a);
      actions[static_cast<std::size_t>(a)] =
          agents_[static_cast<std::size_t>(a)].decide(AgentObservation{ctx.t, ctx.n, ctx.m, list}, rng);
    }
  }

  void observe(const RoundOutcome& outcome) {
    for (std::size_t a = 0; a < agents_.size(); ++a) {
      agents_[a].observe(AgentFeedback{outcome.t, outcome.actions[a],
                                       outcome.matching.firm_of(static_cast<int>(a)),
                                       outcome.vacant, outcome.changed});
    }
    if constexpr (kIsDrr) track_phase(outcome);
  }

  const std::vector<Agent>& agents() const noexcept { return agents_; }
  const Agent& agent(int a) const { return agents_[static_cast<std::size_t>(a)]; }
  const std::vector<PhaseRecord>& phases() const noexcept { return phases_; }

  /// Whether the last played round belonged to an updating phase (drr only).
  bool updating() const {
    if constexpr (kIsDrr) return agents_.front().updating();
    return false;
  }

  long anomalies() const {
    long total = 0;
    if constexpr (std::is_base_of_v<AncdrrAgent, Agent>) {
      for (const auto& agent : agents_) total += agent.anomalies();
    }
    return total;
  }

 private:
  static constexpr bool kIsDrr = std::is_same_v<Agent, DrrAgent>;

  void track_phase(const RoundOutcome& outcome) {
    const auto& lead = agents_.front();
    unsigned triggers = 0;
    for (const auto& agent : agents_) {
      if (agent.t_gs() != lead.t_gs() || agent.updating() != lead.updating()) {
        throw ProtocolError(outcome.t, "drr agents lost phase synchronization");
      }
      triggers |= agent.last_triggers();
    }
    auto& phase = phases_.back();
    const long end = phase.t_gs + lead.phase_length();
    if (outcome.t == end - 1) {
      phase.complete = true;
      phase.final_updating = outcome.matching;
    }
    if (outcome.t == end) {
      for (const auto& agent : agents_) phase.committed.push_back(agent.committed());
    }
    if (lead.t_gs() != phase.t_gs) {
      PhaseRecord next;
      next.index = phase.index + 1;
      next.t_gs = lead.t_gs();
      next.triggers = triggers;
      phases_.push_back(std::move(next));
    }
  }

  std::vector<Agent> agents_;
  std::vector<PhaseRecord> phases_;
};

inline Decentralized<DrrAgent> make_drr(int n, int m) {
  std::vector<DrrAgent> agents;
  for (int a = 0; a < n; ++a) agents.emplace_back(a, n, m);
  return Decentralized<DrrAgent>(std::move(agents));
}

inline Decentralized<AncdrrAgent> make_ancdrr(int n, int m) {
  std::vector<AncdrrAgent> agents;
  for (int a = 0; a < n; ++a) agents.emplace_back(a, n, m);
  return Decentralized<AncdrrAgent>(std::move(agents));
}

inline Decentralized<EancdrrAgent> make_eancdrr(int n, int m, double lambda) {
  std::vector<EancdrrAgent> agents;
  for (int a = 0; a < n; ++a) agents.emplace_back(a, n, m, lambda);
  return Decentralized<EancdrrAgent>(std::move(agents));
}

}  // namespace hintmatch
