#pragma once
// Deterministic random substreams.
//
// Every random decision in a simulation draws from a named substream whose
// seed is derived from the master seed and a fixed key tuple, e.g.
// (trial, agent, purpose[, variant]). Replaying a run with the same master
// seed therefore reproduces it bit for bit, regardless of how many worker
// threads execute the trials.
//
// Derivation rule: h = mix64(master ^ GOLDEN); then for each key k in order,
// h = mix64(h ^ (k + GOLDEN)), where mix64 is the splitmix64 finalizer.
//
// Streams use std::mt19937_64, whose raw output is pinned down by the
// standard. Bounded draws are implemented here (masked rejection, 53-bit
// mantissa scaling) instead of std::*_distribution, whose output is
// implementation-defined and would break replay across toolchains.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <vector>

#include "gossipmab/common.hpp"

namespace gossipmab {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 output finalizer
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Substream purposes. Each (trial, agent, purpose[, variant]) tuple names one
// stream; purposes are never reused across roles.
enum class StreamPurpose : std::uint64_t {
  kReward = 1,    // per (trial, agent): Bernoulli reward draws
  kComm = 2,      // per (trial, agent, variant): peer sampling in Get-Rec
  kStrategy = 3,  // per (trial, agent, variant): malicious strategy draws
  kInit = 4,      // per (trial, agent): initial u/l arm draw
  kSticky = 5,    // per (trial): sticky-set generation
  kArms = 6,      // per (trial): synthetic arm means
};

inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(master ^ kGolden);
  for (std::uint64_t k : keys) h = mix64(h ^ (k + kGolden));
  return h;
}

// One random substream. All draw helpers consume a deterministic number of
// engine outputs given their arguments, so streams never drift out of sync.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform on [0, 1) with 53 random bits
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // uniform integer on [lo, hi], both inclusive; masked rejection
  long long uniform_int(long long lo, long long hi) {
    if (lo > hi) throw std::invalid_argument("Rng::uniform_int: empty range");
    const std::uint64_t span =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (span == 0) return static_cast<long long>(gen_());  // full 64-bit range
    std::uint64_t mask = span - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t v;
    do {
      v = gen_() & mask;
    } while (v >= span);
    return lo + static_cast<long long>(v);
  }

 private:
  std::mt19937_64 gen_;
};

// k distinct values from {0, ..., n-1}, sorted ascending (partial
// Fisher-Yates over an index array, so exactly k bounded draws are consumed).
inline std::vector<int> sample_without_replacement(int k, int n, Rng& rng) {
  if (k < 0 || k > n) {
    throw std::invalid_argument("sample_without_replacement: need 0 <= k <= n");
  }
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    const long long j = rng.uniform_int(i, n - 1);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace gossipmab
