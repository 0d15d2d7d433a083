#pragma once
// Malicious recommendation strategies.
//
// A strategy is asked for an arm whenever a malicious agent is contacted
// through Get-Rec. Built-ins:
//   uniform     — arm uniform over {0, ..., K-1}
//   omniscient  — least-played suboptimal arm outside the asker's active set
// "honest-mimic" is not a Strategy: the engine runs mimics as full honest
// agents (they pull arms, elect, block, and recommend their own election).
//
// Custom strategies register by name in strategy_registry() and are then
// selectable from configs and the command line like the built-ins.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "gossipmab/rng.hpp"

namespace gossipmab {

// Read-only window onto the whole trial. Built-ins never touch it; custom
// strategies that want more than the per-target observation may.
class TrialView {
 public:
  virtual ~TrialView() = default;
  virtual int num_agents() const = 0;       // n + m
  virtual int num_honest() const = 0;       // n
  virtual int num_arms() const = 0;         // K
  virtual long long time() const = 0;       // current step t (an epoch end)
  // Learning agents only (honest, and mimics when the adversary is a mimic).
  virtual long long pulls(int agent, int arm) const = 0;
  virtual std::vector<int> active_set(int agent) const = 0;
};

// Snapshot of the asker, taken at epoch A_j before the recommendation is
// delivered.
struct Observation {
  long long phase = 0;
  int target = -1;
  std::vector<int> target_active;       // sorted
  std::vector<long long> target_pulls;  // per arm, T_k(A_j)
  const TrialView* trial = nullptr;     // engine-wide view for custom hooks
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual int recommend(const Observation& obs, Rng& rng) = 0;
};

class UniformStrategy : public Strategy {
 public:
  explicit UniformStrategy(int num_arms) : num_arms_(num_arms) {}

  int recommend(const Observation&, Rng& rng) override {
    return static_cast<int>(rng.uniform_int(0, num_arms_ - 1));
  }

 private:
  int num_arms_;
};

// Recommends the least-played suboptimal arm outside the asker's active set
// (ties toward the lowest index), maximizing forced exploration. When every
// suboptimal arm is already active it falls back to the least-played
// suboptimal arm overall.
class OmniscientStrategy : public Strategy {
 public:
  explicit OmniscientStrategy(int num_arms) : num_arms_(num_arms) {}

  int recommend(const Observation& obs, Rng&) override {
    int best = -1;
    long long fewest = 0;
    for (int k = 1; k < num_arms_; ++k) {
      if (std::binary_search(obs.target_active.begin(), obs.target_active.end(), k)) {
        continue;
      }
      if (best < 0 || obs.target_pulls[k] < fewest) {
        best = k;
        fewest = obs.target_pulls[k];
      }
    }
    if (best >= 0) return best;
    for (int k = 1; k < num_arms_; ++k) {
      if (best < 0 || obs.target_pulls[k] < fewest) {
        best = k;
        fewest = obs.target_pulls[k];
      }
    }
    if (best < 0) throw std::logic_error("OmniscientStrategy: no suboptimal arm exists");
    return best;
  }

 private:
  int num_arms_;
};

using StrategyFactory = std::function<std::unique_ptr<Strategy>(int num_arms)>;

// Name -> factory. "uniform" and "omniscient" are pre-registered;
// "honest-mimic" is reserved and handled by the engine.
class StrategyRegistry {
 public:
  StrategyRegistry() {
    add("uniform", [](int k) { return std::make_unique<UniformStrategy>(k); });
    add("omniscient", [](int k) { return std::make_unique<OmniscientStrategy>(k); });
  }

  void add(const std::string& name, StrategyFactory factory) {
    factories_[name] = std::move(factory);
  }

  bool contains(const std::string& name) const { return factories_.count(name) > 0; }

  std::unique_ptr<Strategy> make(const std::string& name, int num_arms) const {
    const auto it = factories_.find(name);
    if (it == factories_.end()) {
      throw std::invalid_argument("unknown strategy: " + name);
    }
    return it->second(num_arms);
  }

 private:
  std::map<std::string, StrategyFactory> factories_;
};

inline StrategyRegistry& strategy_registry() {
  static StrategyRegistry registry;
  return registry;
}

inline constexpr const char* kHonestMimic = "honest-mimic";

}  // namespace gossipmab
