#pragma once
// Trial execution: the per-step time loop, epoch processing (elections,
// blocklist updates, Get-Rec, active-set updates), event logging, regret
// traces at checkpoints, and the spread/stabilization estimators tau.
//
// Epoch order at each A_j: first every learning agent elects its B_j, then —
// agent by agent in id order — blocklist update, Get-Rec, incorporation of
// the recommendation, and the phase snapshot. Splitting the stages this way
// guarantees an honest peer always answers with its election for the phase
// that just closed.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gossipmab/adversary.hpp"
#include "gossipmab/arms.hpp"
#include "gossipmab/common.hpp"
#include "gossipmab/events.hpp"
#include "gossipmab/protocol.hpp"
#include "gossipmab/rng.hpp"

namespace gossipmab {

enum class Variant { kBlocking, kNoBlocking, kNoCommunication, kOracle };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kBlocking: return "blocking";
    case Variant::kNoBlocking: return "no-blocking";
    case Variant::kNoCommunication: return "no-communication";
    case Variant::kOracle: return "oracle";
  }
  return "?";
}

inline std::optional<Variant> parse_variant(std::string_view name) {
  if (name == "blocking") return Variant::kBlocking;
  if (name == "no-blocking") return Variant::kNoBlocking;
  if (name == "no-communication") return Variant::kNoCommunication;
  if (name == "oracle") return Variant::kOracle;
  return std::nullopt;
}

// ~`points` log-spaced time steps in [1, T], deduplicated, always ending at T.
inline std::vector<long long> default_checkpoints(long long T, int points = 200) {
  GOSSIPMAB_CHECK(T >= 1 && points >= 1);
  std::vector<long long> out;
  const double log_T = std::log(static_cast<double>(T));
  for (int i = 0; i < points; ++i) {
    const double f = points == 1 ? 1.0 : static_cast<double>(i) / (points - 1);
    long long t = std::llround(std::exp(f * log_T));
    t = std::max<long long>(1, std::min(T, t));
    if (out.empty() || t > out.back()) out.push_back(t);
  }
  if (out.back() != T) out.push_back(T);
  return out;
}

struct SimConfig {
  int n = 25;            // honest agents
  int m = 0;             // malicious agents
  int K = 100;           // arms
  long long T = 100000;  // horizon
  double alpha = 4.0;    // UCB exploration scale
  double beta = 2.0;     // epoch growth: A_j = ceil(j^beta)
  double eta = 2.0;      // block growth: windows end at ceil(j^eta)
  int S = 4;             // sticky arms per agent
  Variant variant = Variant::kBlocking;
  std::string strategy = "uniform";
  std::uint64_t master_seed = 1;
  bool log_events = true;
  std::vector<long long> checkpoints;  // empty: default_checkpoints(T)

  bool mimic_adversary() const { return strategy == kHonestMimic; }

  void validate() const {
    if (n < 1) throw std::invalid_argument("config: need at least one honest agent");
    if (m < 0) throw std::invalid_argument("config: m must be non-negative");
    if (T < 1) throw std::invalid_argument("config: T must be positive");
    if (S < 1) throw std::invalid_argument("config: S must be positive");
    if (K < S + 2) throw std::invalid_argument("config: need K >= S + 2");
    if (!(alpha > 0)) throw std::invalid_argument("config: alpha must be positive");
    if (!(beta > 1)) throw std::invalid_argument("config: beta must exceed 1");
    if (!(eta > 1)) throw std::invalid_argument("config: eta must exceed 1");
    if (m > 0 && !mimic_adversary() && !strategy_registry().contains(strategy)) {
      throw std::invalid_argument("config: unknown strategy: " + strategy);
    }
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      if (checkpoints[i] < 1 || checkpoints[i] > T) {
        throw std::invalid_argument("config: checkpoints must lie in [1, T]");
      }
      if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
        throw std::invalid_argument("config: checkpoints must be strictly increasing");
      }
    }
    if (!checkpoints.empty() && checkpoints.back() != T) {
      throw std::invalid_argument("config: checkpoints must include T");
    }
  }
};

// Per-phase record of which honest agents carried the best arm in their
// active set and which elected it, for phases 1..j_max. Input to estimate_tau.
struct PhaseHistory {
  int n = 0;
  long long j_max = 0;
  std::vector<std::uint8_t> best_active;   // [(j-1)*n + i]
  std::vector<std::uint8_t> best_elected;

  bool operator==(const PhaseHistory&) const = default;

  void append_phase(const std::vector<std::uint8_t>& active_flags,
                    const std::vector<std::uint8_t>& elected_flags) {
    GOSSIPMAB_CHECK(static_cast<int>(active_flags.size()) == n);
    GOSSIPMAB_CHECK(static_cast<int>(elected_flags.size()) == n);
    best_active.insert(best_active.end(), active_flags.begin(), active_flags.end());
    best_elected.insert(best_elected.end(), elected_flags.begin(), elected_flags.end());
    ++j_max;
  }

  bool active(long long j, int i) const { return best_active[(j - 1) * n + i] != 0; }
  bool elected(long long j, int i) const { return best_elected[(j - 1) * n + i] != 0; }
};

struct TauEstimate {
  long long j_max = 0;
  long long tau_stab = 0;
  bool tau_stab_censored = true;
  long long tau = 0;
  bool tau_censored = true;

  bool operator==(const TauEstimate&) const = default;
};

// Horizon-censored estimators of the stabilization and spread phases.
//   tau_stab: smallest j such that for every later observed phase, any honest
//             agent holding the best arm also elects it.
//   tau:      smallest j >= tau_stab such that for every later observed phase
//             every honest agent both holds and elects the best arm.
// The true quantities range over an infinite future; an estimate equal to
// j_max (or j_max + 1 when even the last phase fails) is flagged censored.
inline TauEstimate estimate_tau(const PhaseHistory& h) {
  TauEstimate e;
  e.j_max = h.j_max;
  if (h.j_max < 1) {
    e.tau_stab = e.tau = 1;
    e.tau_stab_censored = e.tau_censored = true;
    return e;
  }
  const auto ok_stab = [&](long long j) {
    for (int i = 0; i < h.n; ++i) {
      if (h.active(j, i) && !h.elected(j, i)) return false;
    }
    return true;
  };
  const auto ok_tau = [&](long long j) {
    for (int i = 0; i < h.n; ++i) {
      if (!(h.active(j, i) && h.elected(j, i))) return false;
    }
    return true;
  };
  long long stab = h.j_max + 1;
  for (long long j = h.j_max; j >= 1 && ok_stab(j); --j) stab = j;
  e.tau_stab = stab;
  e.tau_stab_censored = stab >= h.j_max;
  long long tau = h.j_max + 1;
  for (long long j = h.j_max; j >= stab && ok_tau(j); --j) tau = j;
  e.tau = tau;
  e.tau_censored = tau >= h.j_max;
  return e;
}

// n sticky sets of size S over {0..K-1}; the whole collection is resampled
// until some agent holds the best arm.
inline std::vector<std::vector<int>> generate_sticky_sets(int n, int K, int S,
                                                          Rng& rng) {
  if (n < 1 || S < 1 || S > K - 2) {
    throw std::invalid_argument("generate_sticky_sets: need n >= 1, 1 <= S <= K - 2");
  }
  for (int attempt = 0; attempt < (1 << 20); ++attempt) {
    std::vector<std::vector<int>> sets(n);
    bool best_covered = false;
    for (int i = 0; i < n; ++i) {
      sets[i] = sample_without_replacement(S, K, rng);
      best_covered = best_covered || sets[i][0] == 0;  // sorted: arm 0 is first
    }
    if (best_covered) return sets;
  }
  throw std::logic_error("generate_sticky_sets: resampling did not terminate");
}

struct TrialResult {
  int trial = 0;
  Variant variant = Variant::kBlocking;
  std::vector<long long> checkpoints;
  std::vector<std::vector<double>> regret;         // [honest agent][checkpoint]
  std::vector<std::vector<long long>> final_pulls; // [honest agent][arm]
  PhaseHistory history;
  TauEstimate tau;
  EventLog log;

  double mean_final_regret() const {
    double sum = 0.0;
    for (const auto& r : regret) sum += r.back();
    return sum / static_cast<double>(regret.size());
  }
};

namespace detail {

inline constexpr long long kNeverUnblock = std::numeric_limits<long long>::max();

// State and loop for one (config, trial, arm set) execution. Implements
// TrialView so custom strategies can take an engine-wide read-only look.
class TrialRunner : public TrialView {
 public:
  TrialRunner(const SimConfig& cfg, int trial, const ArmSet& arms)
      : cfg_(cfg), trial_(trial), arms_(arms), sched_(cfg.beta) {
    cfg_.validate();
    GOSSIPMAB_CHECK(arms_.size() == cfg_.K);
    mimic_ = cfg_.mimic_adversary();
    total_ = cfg_.n + cfg_.m;
    learners_ = cfg_.n + (mimic_ ? cfg_.m : 0);
    const auto key = [&](StreamPurpose p) { return static_cast<std::uint64_t>(p); };
    const auto vkey = static_cast<std::uint64_t>(cfg_.variant) + 1;
    const auto tkey = static_cast<std::uint64_t>(trial_);

    // Sticky sets and initial slots draw from variant-independent streams, so
    // paired variants start every trial from identical protocol state.
    Rng sticky_rng(derive_seed(cfg_.master_seed, {tkey, key(StreamPurpose::kSticky)}));
    auto sticky = generate_sticky_sets(cfg_.n, cfg_.K, cfg_.S, sticky_rng);
    for (int i = cfg_.n; i < learners_; ++i) {
      sticky.push_back(sample_without_replacement(cfg_.S, cfg_.K, sticky_rng));
    }

    agents_.reserve(learners_);
    for (int i = 0; i < learners_; ++i) {
      Rng init_rng(derive_seed(cfg_.master_seed,
                               {tkey, static_cast<std::uint64_t>(i),
                                key(StreamPurpose::kInit)}));
      const auto [u, l] = draw_initial_slots(sticky[i], cfg_.K, init_rng);
      agents_.emplace_back(i, cfg_.K, total_, sticky[i], u, l);
      reward_rng_.emplace_back(derive_seed(
          cfg_.master_seed,
          {tkey, static_cast<std::uint64_t>(i), key(StreamPurpose::kReward)}));
      comm_rng_.emplace_back(derive_seed(
          cfg_.master_seed, {tkey, static_cast<std::uint64_t>(i),
                             key(StreamPurpose::kComm), vkey}));
    }
    if (cfg_.variant == Variant::kOracle) {
      for (auto& a : agents_) {
        for (int p = cfg_.n; p < total_; ++p) a.blocklist.block_until(p, kNeverUnblock);
      }
    }
    if (!mimic_ && cfg_.m > 0) {
      for (int p = cfg_.n; p < total_; ++p) {
        strategies_.push_back(strategy_registry().make(cfg_.strategy, cfg_.K));
        strategy_rng_.emplace_back(derive_seed(
            cfg_.master_seed, {tkey, static_cast<std::uint64_t>(p),
                               key(StreamPurpose::kStrategy), vkey}));
      }
    }
    if (cfg_.variant == Variant::kNoCommunication) {
      active_all_.resize(cfg_.K);
      for (int k = 0; k < cfg_.K; ++k) active_all_[k] = k;
    }
  }

  TrialResult run() {
    TrialResult res;
    res.trial = trial_;
    res.variant = cfg_.variant;
    res.checkpoints =
        cfg_.checkpoints.empty() ? default_checkpoints(cfg_.T) : cfg_.checkpoints;
    res.regret.assign(cfg_.n, {});
    for (auto& r : res.regret) r.reserve(res.checkpoints.size());
    res.history.n = cfg_.n;

    const bool epochs = cfg_.variant != Variant::kNoCommunication;
    long long j = 1;
    long long next_epoch = sched_.epoch(1);
    std::size_t cp = 0;

    for (t_ = 1; t_ <= cfg_.T; ++t_) {
      const double log_t = std::log(static_cast<double>(t_));
      for (int i = 0; i < learners_; ++i) {
        auto& a = agents_[i];
        const auto& active = epochs ? a.active : active_all_;
        const int arm = select_arm_logt(a.stats, active, log_t, cfg_.alpha);
        a.stats.record(arm, sample_reward(arms_, arm, reward_rng_[i]));
      }
      if (epochs && t_ == next_epoch) {
        process_epoch(j, res);
        ++j;
        next_epoch = sched_.epoch(j);
      }
      if (cp < res.checkpoints.size() && t_ == res.checkpoints[cp]) {
        for (int i = 0; i < cfg_.n; ++i) {
          res.regret[i].push_back(cumulative_regret(arms_, agents_[i].stats));
        }
        ++cp;
      }
    }
    GOSSIPMAB_CHECK(cp == res.checkpoints.size());

    res.final_pulls.reserve(cfg_.n);
    for (int i = 0; i < cfg_.n; ++i) res.final_pulls.push_back(agents_[i].stats.pulls);
    res.tau = estimate_tau(res.history);
    res.log = std::move(log_);
    return res;
  }

  // TrialView
  int num_agents() const override { return total_; }
  int num_honest() const override { return cfg_.n; }
  int num_arms() const override { return cfg_.K; }
  long long time() const override { return t_; }
  long long pulls(int agent, int arm) const override {
    GOSSIPMAB_CHECK(agent >= 0 && agent < learners_);
    return agents_[agent].stats.pulls[arm];
  }
  std::vector<int> active_set(int agent) const override {
    GOSSIPMAB_CHECK(agent >= 0 && agent < learners_);
    return agents_[agent].active;
  }

 private:
  // Two distinct arms drawn in order (first u, then l) from the complement of
  // the sticky set.
  static std::pair<int, int> draw_initial_slots(const std::vector<int>& sticky,
                                                int num_arms, Rng& rng) {
    std::vector<int> complement;
    complement.reserve(num_arms - static_cast<int>(sticky.size()));
    std::size_t s = 0;  // sticky is sorted
    for (int k = 0; k < num_arms; ++k) {
      if (s < sticky.size() && sticky[s] == k) {
        ++s;
        continue;
      }
      complement.push_back(k);
    }
    GOSSIPMAB_CHECK(complement.size() >= 2);
    const auto i1 = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<long long>(complement.size()) - 1));
    const int u = complement[i1];
    complement.erase(complement.begin() + static_cast<std::ptrdiff_t>(i1));
    const auto i2 = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<long long>(complement.size()) - 1));
    return {u, complement[i2]};
  }

  void process_epoch(long long j, TrialResult& res) {
    // stage 1: every learner elects B_j for the phase that ends now
    std::vector<std::uint8_t> best_active(cfg_.n), best_elected(cfg_.n);
    for (int i = 0; i < learners_; ++i) {
      auto& a = agents_[i];
      a.most_played = most_played_in_phase(a);
      if (cfg_.log_events) {
        log_.elections.push_back(ElectionRecord{j, i, a.most_played});
      }
      if (i < cfg_.n) {
        best_active[i] = a.is_active(0) ? 1 : 0;
        best_elected[i] = a.most_played == 0 ? 1 : 0;
      }
    }
    res.history.append_phase(best_active, best_elected);

    // stage 2: per learner, in id order
    std::vector<int> candidates;
    candidates.reserve(total_);
    for (int i = 0; i < learners_; ++i) {
      auto& a = agents_[i];
      if (cfg_.variant == Variant::kBlocking) {
        if (const auto act = update_blocklist(a, j, cfg_.eta); act && cfg_.log_events) {
          log_.blocks.push_back(BlockRecord{j, i, act->peer, act->until_phase});
        }
      }
      candidates.clear();
      for (int p = 0; p < total_; ++p) {
        if (p != i && !a.blocklist.is_blocked(p, j)) candidates.push_back(p);
      }
      if (candidates.empty()) {
        a.last_peer.reset();
        a.last_rec.reset();
      } else {
        const int peer = candidates[static_cast<std::size_t>(
            comm_rng_[i].uniform_int(0, static_cast<long long>(candidates.size()) - 1))];
        int rec;
        if (peer < learners_) {
          rec = agents_[peer].most_played;
        } else {
          rec = strategies_[peer - cfg_.n]->recommend(observe(a, j),
                                                      strategy_rng_[peer - cfg_.n]);
          GOSSIPMAB_CHECK(rec >= 0 && rec < cfg_.K);
        }
        if (cfg_.log_events) log_.contacts.push_back(ContactRecord{j, i, peer, rec});
        if (const auto change = incorporate_recommendation(a, rec);
            change && cfg_.log_events) {
          log_.active_changes.push_back(
              ActiveChangeRecord{j, i, change->dropped, change->added});
        }
        a.last_peer = peer;
        a.last_rec = rec;
      }
      snapshot_phase_start(a);
      GOSSIPMAB_CHECK(static_cast<int>(a.active.size()) == cfg_.S + 2);
      GOSSIPMAB_CHECK(a.stats.total_pulls() == t_);
    }
  }

  Observation observe(const AgentState& target, long long j) const {
    Observation obs;
    obs.phase = j;
    obs.target = target.id;
    obs.target_active = target.active;
    obs.target_pulls = target.stats.pulls;
    obs.trial = this;
    return obs;
  }

  SimConfig cfg_;
  int trial_;
  const ArmSet& arms_;
  Schedule sched_;
  bool mimic_ = false;
  int total_ = 0;     // n + m
  int learners_ = 0;  // agents that pull arms: n, or n + m under honest-mimic
  long long t_ = 0;
  std::vector<AgentState> agents_;
  std::vector<Rng> reward_rng_;
  std::vector<Rng> comm_rng_;
  std::vector<std::unique_ptr<Strategy>> strategies_;  // malicious, non-mimic
  std::vector<Rng> strategy_rng_;
  std::vector<int> active_all_;  // no-communication: UCB over all arms
  EventLog log_;
};

}  // namespace detail

inline TrialResult run_trial(const SimConfig& cfg, int trial, const ArmSet& arms) {
  detail::TrialRunner runner(cfg, trial, arms);
  return runner.run();
}

}  // namespace gossipmab
