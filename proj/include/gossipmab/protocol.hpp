#pragma once
// Per-agent state of the phased gossip protocol: the epoch schedule, the
// blocklist, the sticky/active arm sets, phase elections, and the rules for
// folding a received recommendation into the next phase's active set.
//
// Phases are 1-based. Phase j covers time steps A_{j-1}+1 .. A_j, where
// A_j = ceil(j^beta). At each epoch end A_j an agent elects its most-played
// active arm B_j, updates its blocklist (blocking variant), asks one
// non-blocked peer for a recommendation, and swaps the recommendation into
// one of its two non-sticky slots if it is not already active.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gossipmab/arms.hpp"
#include "gossipmab/common.hpp"

namespace gossipmab {

// ceil(base^e) with a snap-to-integer guard: pow() results that land within
// a relative 1e-9 of an integer are taken as that integer, so exact powers
// (e.g. 5^2) never round up to the next value.
inline long long ceil_pow(long long base, double e) {
  GOSSIPMAB_CHECK(base >= 0);
  const double r = std::pow(static_cast<double>(base), e);
  const double nearest = std::nearbyint(r);
  if (std::fabs(r - nearest) <= 1e-9 * std::max(1.0, std::fabs(nearest))) {
    return static_cast<long long>(nearest);
  }
  return static_cast<long long>(std::ceil(r));
}

// Epoch schedule A_j = ceil(j^beta), A_0 = 0; strictly increasing for beta > 1.
class Schedule {
 public:
  explicit Schedule(double beta) : beta_(beta) {
    if (!(beta > 1.0)) throw std::invalid_argument("Schedule: beta must exceed 1");
  }

  double beta() const { return beta_; }

  long long epoch(long long j) const {
    if (j < 0) throw std::invalid_argument("Schedule::epoch: negative phase");
    return j == 0 ? 0 : ceil_pow(j, beta_);
  }

 private:
  double beta_;
};

// One agent's blocklist. unblock_phase(peer) is the last phase (inclusive)
// at which the peer is still excluded from Get-Rec; 0 means never blocked.
class BlockList {
 public:
  explicit BlockList(int total_agents) : unblock_phase_(total_agents, 0) {}

  int total_agents() const { return static_cast<int>(unblock_phase_.size()); }

  bool is_blocked(int peer, long long phase) const {
    return unblock_phase_[peer] >= phase;
  }

  long long unblock_phase(int peer) const { return unblock_phase_[peer]; }

  // Extend a window, never shrink one (re-blocking merges by max).
  void block_until(int peer, long long phase) {
    if (phase > unblock_phase_[peer]) unblock_phase_[peer] = phase;
  }

 private:
  std::vector<long long> unblock_phase_;
};

// Protocol state of one learning agent. Honest agents always run this; the
// honest-mimic adversary runs it too, so both share one code path.
struct AgentState {
  int id = -1;
  std::vector<int> sticky;  // sorted, size S, fixed for the whole run
  int u_arm = -1;           // the two rotating non-sticky slots
  int l_arm = -1;
  std::vector<int> active;  // sorted; sticky ∪ {u_arm, l_arm}, size S + 2
  ArmStats stats;
  std::vector<long long> phase_start_pulls;  // snapshot of stats.pulls at A_{j-1}
  std::optional<int> last_peer;  // peer asked at the previous epoch, if any
  std::optional<int> last_rec;   // and what it recommended
  int most_played = -1;          // B_j, refreshed by the epoch-A_j election
  BlockList blocklist;

  AgentState(int agent_id, int num_arms, int total_agents,
             std::vector<int> sticky_set, int u, int l)
      : id(agent_id),
        sticky(std::move(sticky_set)),
        u_arm(u),
        l_arm(l),
        stats(num_arms),
        phase_start_pulls(num_arms, 0),
        blocklist(total_agents) {
    GOSSIPMAB_CHECK(u_arm != l_arm);
    rebuild_active();
  }

  long long pulls_within_phase(int arm) const {
    return stats.pulls[arm] - phase_start_pulls[arm];
  }

  void rebuild_active() {
    active = sticky;
    active.push_back(u_arm);
    active.push_back(l_arm);
    std::sort(active.begin(), active.end());
    GOSSIPMAB_CHECK(std::adjacent_find(active.begin(), active.end()) == active.end());
  }

  bool is_active(int arm) const {
    return std::binary_search(active.begin(), active.end(), arm);
  }
};

// B_j: the most-played active arm within the phase that ends now; ties break
// toward the lowest arm index.
inline int most_played_in_phase(const AgentState& a) {
  GOSSIPMAB_CHECK(!a.active.empty());
  int best = -1;
  long long best_pulls = -1;
  for (const int arm : a.active) {  // active is sorted, so first max wins
    const long long pulls = a.pulls_within_phase(arm);
    if (pulls > best_pulls) {
      best = arm;
      best_pulls = pulls;
    }
  }
  return best;
}

struct BlockAction {
  int peer = -1;
  long long until_phase = 0;
};

// Blocklist update at epoch A_j: if the previous epoch's recommendation
// disagrees with this phase's elected arm, block that recommender through
// phase ceil(j^eta) (merged by max with any existing window).
inline std::optional<BlockAction> update_blocklist(AgentState& a, long long j,
                                                   double eta) {
  if (j <= 1 || !a.last_peer.has_value()) return std::nullopt;
  GOSSIPMAB_CHECK(a.most_played >= 0);
  GOSSIPMAB_CHECK(a.last_rec.has_value());
  if (a.most_played == *a.last_rec) return std::nullopt;
  const int peer = *a.last_peer;
  a.blocklist.block_until(peer, ceil_pow(j, eta));
  return BlockAction{peer, a.blocklist.unblock_phase(peer)};
}

struct ActiveSetChange {
  int dropped = -1;
  int added = -1;
};

// Fold an epoch-j recommendation into the active set for phase j+1. An
// already-active recommendation changes nothing. Otherwise the more-played
// of {u_arm, l_arm} within the closing phase survives as the next u_arm
// (ties keep the current u_arm) and the recommendation becomes the next
// l_arm; the sticky set never changes.
inline std::optional<ActiveSetChange> incorporate_recommendation(AgentState& a,
                                                                 int rec) {
  if (a.is_active(rec)) return std::nullopt;
  const long long u_pulls = a.pulls_within_phase(a.u_arm);
  const long long l_pulls = a.pulls_within_phase(a.l_arm);
  const int kept = l_pulls > u_pulls ? a.l_arm : a.u_arm;
  const int dropped = kept == a.u_arm ? a.l_arm : a.u_arm;
  a.u_arm = kept;
  a.l_arm = rec;
  a.rebuild_active();
  return ActiveSetChange{dropped, rec};
}

// End-of-epoch bookkeeping: the next phase's within-phase counters start here.
inline void snapshot_phase_start(AgentState& a) {
  a.phase_start_pulls = a.stats.pulls;
}

}  // namespace gossipmab
