#pragma once
// Bernoulli arm set, per-agent pull statistics, and UCB(alpha) selection.
//
// Arms are relabeled at construction so that means are non-increasing and
// arm 0 is the unique best arm; original_label() maps an internal index back
// to its position in the input, so reports can use the caller's labels.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "gossipmab/common.hpp"
#include "gossipmab/rng.hpp"

namespace gossipmab {

class ArmSet {
 public:
  explicit ArmSet(std::vector<double> means) {
    const int k = static_cast<int>(means.size());
    if (k < 1) throw std::invalid_argument("ArmSet: need at least one arm");
    for (int i = 0; i < k; ++i) {
      if (!(means[i] >= 0.0 && means[i] <= 1.0)) {
        throw std::invalid_argument("ArmSet: means must lie in [0, 1]");
      }
    }
    original_label_.resize(k);
    std::iota(original_label_.begin(), original_label_.end(), 0);
    std::stable_sort(original_label_.begin(), original_label_.end(),
                     [&](int a, int b) { return means[a] > means[b]; });
    means_.resize(k);
    for (int i = 0; i < k; ++i) means_[i] = means[original_label_[i]];
    if (k >= 2 && !(means_[0] > means_[1])) {
      throw std::invalid_argument("ArmSet: best arm must be unique");
    }
  }

  int size() const { return static_cast<int>(means_.size()); }
  double mean(int arm) const { return means_[arm]; }
  double gap(int arm) const { return means_[0] - means_[arm]; }
  int original_label(int arm) const { return original_label_[arm]; }
  const std::vector<double>& means() const { return means_; }

  // Δ_2..Δ_K in internal (sorted) order: the inputs the regret bounds take.
  std::vector<double> suboptimal_gaps() const {
    std::vector<double> g;
    g.reserve(means_.size() > 0 ? means_.size() - 1 : 0);
    for (int k = 1; k < size(); ++k) g.push_back(gap(k));
    return g;
  }

 private:
  std::vector<double> means_;
  std::vector<int> original_label_;
};

inline bool sample_reward(const ArmSet& arms, int arm, Rng& rng) {
  return rng.bernoulli(arms.mean(arm));
}

// One agent's running pull counts and success counts.
struct ArmStats {
  std::vector<long long> pulls;
  std::vector<long long> successes;

  explicit ArmStats(int num_arms)
      : pulls(num_arms, 0), successes(num_arms, 0) {}

  int num_arms() const { return static_cast<int>(pulls.size()); }

  void record(int arm, bool reward) {
    ++pulls[arm];
    if (reward) ++successes[arm];
  }

  double mean_estimate(int arm) const {
    return pulls[arm] == 0
               ? 0.0
               : static_cast<double>(successes[arm]) / static_cast<double>(pulls[arm]);
  }

  long long total_pulls() const {
    return std::accumulate(pulls.begin(), pulls.end(), 0LL);
  }
};

// UCB(alpha) index with the log of t precomputed (the engine computes log(t)
// once per step and shares it across agents and arms).
inline double ucb_index_logt(const ArmStats& stats, int arm, double log_t,
                             double alpha) {
  const long long n = stats.pulls[arm];
  if (n == 0) return std::numeric_limits<double>::infinity();
  return stats.mean_estimate(arm) +
         std::sqrt(alpha * log_t / static_cast<double>(n));
}

inline double ucb_index(const ArmStats& stats, int arm, long long t, double alpha) {
  return ucb_index_logt(stats, arm, std::log(static_cast<double>(t)), alpha);
}

// Argmax of the UCB index over the given arms; ties break toward the lowest
// arm index, so the result does not depend on the iteration order.
inline int select_arm_logt(const ArmStats& stats, std::span<const int> active,
                           double log_t, double alpha) {
  if (active.empty()) {
    throw std::invalid_argument("select_arm: empty active set");
  }
  int best = -1;
  double best_index = 0.0;
  for (const int arm : active) {
    const double index = ucb_index_logt(stats, arm, log_t, alpha);
    if (best < 0 || index > best_index || (index == best_index && arm < best)) {
      best = arm;
      best_index = index;
    }
  }
  return best;
}

inline int select_arm(const ArmStats& stats, std::span<const int> active,
                      long long t, double alpha) {
  return select_arm_logt(stats, active, std::log(static_cast<double>(t)), alpha);
}

// Cumulative pseudo-regret identity: sum_k Δ_k * T_k. Computed from the pull
// counts directly, so checkpointed values carry no accumulation drift.
inline double cumulative_regret(const ArmSet& arms, const ArmStats& stats) {
  GOSSIPMAB_CHECK(arms.size() == stats.num_arms());
  double regret = 0.0;
  for (int k = 0; k < arms.size(); ++k) {
    regret += arms.gap(k) * static_cast<double>(stats.pulls[k]);
  }
  return regret;
}

}  // namespace gossipmab
