#pragma once
// Closed-form regret bounds and the parameter conditions they require.
//
// Upper bound (blocking protocol), evaluated at horizon T:
//
//   4a * min{ (2h-1)/(h-1) * sum_{k=2}^{m+3} 1/D_k + sum_{k=m+4}^{S+m+4} 1/D_k,
//             sum_{k=2}^{K} 1/D_k } * ln T  +  C*
//
// with a = alpha, h = eta, gaps D_k extended by the convention D_k = 1 for
// k > K. C* is an additive constant of five terms (see below); it is huge but
// horizon-independent, so bound comparisons are only informative through the
// leading ln T coefficient.
//
// Lower bound (any no-blocking gossip protocol, one malicious agent):
// cumulative regret grows at least as alpha*(1 - 1/sqrt(alpha))^2 *
// sum_{k=2}^K 1/D_k * ln T, asymptotically in T.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gossipmab/common.hpp"

namespace gossipmab {

struct BoundInputs {
  long long T = 0;
  int n = 0;  // honest agents
  int m = 0;  // malicious agents
  int K = 0;  // arms
  int S = 0;  // sticky arms per agent
  double alpha = 0.0;
  double beta = 0.0;
  double eta = 0.0;
  std::vector<double> gaps;  // D_2..D_K, positive, non-decreasing
};

struct ParamValidity {
  bool beta_ok = false;      // beta > 1
  bool eta_ok = false;       // eta > 1
  bool alpha_ok = false;     // alpha > (3 + (1 + beta*eta)/beta) / 2
  bool gaps_ok = false;      // K-1 positive, non-decreasing gaps
  bool sizes_ok = false;     // n >= 1, m >= 0, S >= 1, K >= 2, T >= 2
  double alpha_threshold = 0.0;

  bool theorem2_ok() const { return beta_ok && eta_ok && alpha_ok && gaps_ok && sizes_ok; }
};

inline ParamValidity check_parameters(const BoundInputs& in) {
  ParamValidity v;
  v.beta_ok = in.beta > 1.0;
  v.eta_ok = in.eta > 1.0;
  v.alpha_threshold =
      v.beta_ok ? (3.0 + (1.0 + in.beta * in.eta) / in.beta) / 2.0 : 0.0;
  v.alpha_ok = v.beta_ok && v.eta_ok && in.alpha > v.alpha_threshold;
  v.gaps_ok = static_cast<int>(in.gaps.size()) == in.K - 1 && !in.gaps.empty();
  for (std::size_t i = 0; v.gaps_ok && i < in.gaps.size(); ++i) {
    if (!(in.gaps[i] > 0.0) || (i > 0 && in.gaps[i] < in.gaps[i - 1])) v.gaps_ok = false;
  }
  v.sizes_ok = in.n >= 1 && in.m >= 0 && in.S >= 1 && in.K >= 2 && in.T >= 2;
  return v;
}

namespace detail {

// 1/D_k for 2 <= k <= K, and 1 beyond the arm count.
inline double inv_gap(const BoundInputs& in, long long k) {
  return k <= in.K ? 1.0 / in.gaps[static_cast<std::size_t>(k - 2)] : 1.0;
}

}  // namespace detail

// 4*alpha*min{blocked-branch sum, all-arms sum}: the ln T coefficient.
inline double theorem2_leading_coefficient(const BoundInputs& in) {
  double blocked = 0.0;
  for (long long k = 2; k <= in.m + 3; ++k) blocked += detail::inv_gap(in, k);
  blocked *= (2.0 * in.eta - 1.0) / (in.eta - 1.0);
  for (long long k = in.m + 4; k <= in.S + in.m + 4; ++k) {
    blocked += detail::inv_gap(in, k);
  }
  double all_arms = 0.0;
  for (long long k = 2; k <= in.K; ++k) all_arms += detail::inv_gap(in, k);
  return 4.0 * in.alpha * std::min(blocked, all_arms);
}

// The additive constant C*, the sum of five terms:
//   1. 2^(1+bh) * (4 + (26a(S+2) / ((b-1) D_2^2))^(2/(b-1)))^(bh)
//   2. 2^(b(2a-3)+1) * n * C(K,2) * (S+1)
//        / ((2a-3) * (b(2a-3)-1) * ((b(2a-3)-1)/h - b))
//   3. (10b/(b-1)) * max{6(m+n) max{ln n, 2(b-1)}, 3(6^h + 2)}^b
//   4. 4K(a-1) / (2a-3)
//   5. 8ab * (K + log_h(K/D_2) * (m+2)) / D_2
// written with a = alpha, b = beta, h = eta, and log_h(x) = ln x / ln h.
inline double theorem2_additive_constant(const BoundInputs& in) {
  const double a = in.alpha, b = in.beta, h = in.eta;
  const double d2 = in.gaps.front();
  const double n = static_cast<double>(in.n);
  const double m = static_cast<double>(in.m);
  const double K = static_cast<double>(in.K);
  const double S = static_cast<double>(in.S);
  const double choose2 =
      static_cast<double>(static_cast<long long>(in.K) * (in.K - 1) / 2);

  const double term1 =
      std::pow(2.0, 1.0 + b * h) *
      std::pow(4.0 + std::pow(26.0 * a * (S + 2.0) / ((b - 1.0) * d2 * d2),
                              2.0 / (b - 1.0)),
               b * h);
  const double term2 = std::pow(2.0, b * (2.0 * a - 3.0) + 1.0) * n * choose2 *
                       (S + 1.0) /
                       ((2.0 * a - 3.0) * (b * (2.0 * a - 3.0) - 1.0) *
                        ((b * (2.0 * a - 3.0) - 1.0) / h - b));
  const double term3 =
      (10.0 * b / (b - 1.0)) *
      std::pow(std::max(6.0 * (m + n) * std::max(std::log(n), 2.0 * (b - 1.0)),
                        3.0 * (std::pow(6.0, h) + 2.0)),
               b);
  const double term4 = 4.0 * K * (a - 1.0) / (2.0 * a - 3.0);
  const double term5 =
      8.0 * a * b * (K + std::log(K / d2) / std::log(h) * (m + 2.0)) / d2;
  return term1 + term2 + term3 + term4 + term5;
}

// Full upper bound at horizon T; nullopt when the parameters fall outside
// the bound's validity region.
inline std::optional<double> theorem2_upper_bound(const BoundInputs& in) {
  if (!check_parameters(in).theorem2_ok()) return std::nullopt;
  return theorem2_leading_coefficient(in) * std::log(static_cast<double>(in.T)) +
         theorem2_additive_constant(in);
}

// Coefficient of ln T in the lower bound: alpha (1 - 1/sqrt(alpha))^2 *
// sum 1/D_k. Requires alpha > 1 (the factor vanishes at alpha = 1).
inline std::optional<double> theorem1_lower_coefficient(
    double alpha, std::span<const double> gaps) {
  if (!(alpha > 1.0) || gaps.empty()) return std::nullopt;
  double sum = 0.0;
  for (const double d : gaps) {
    if (!(d > 0.0)) return std::nullopt;
    sum += 1.0 / d;
  }
  const double factor = alpha * (1.0 - 1.0 / std::sqrt(alpha)) *
                        (1.0 - 1.0 / std::sqrt(alpha));
  return factor * sum;
}

}  // namespace gossipmab
