// Closed-form bound formulas and their validity conditions.

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gossipmab/theory.hpp"

namespace gossipmab {
namespace {

// floating-point reference values cross multiple libm calls; compare relative
void expect_rel_near(double value, double reference, double rel = 1e-9) {
  EXPECT_NEAR(value, reference, rel * std::fabs(reference));
}

BoundInputs paper_inputs() {
  BoundInputs in;
  in.T = 100000;
  in.n = 25;
  in.m = 10;
  in.K = 100;
  in.S = 4;
  in.alpha = 4.0;
  in.beta = 2.0;
  in.eta = 2.0;
  in.gaps.push_back(0.1);
  for (int k = 3; k <= in.K; ++k) in.gaps.push_back(0.1 + 0.85 * (k - 2) / 98.0);
  return in;
}

BoundInputs small_inputs() {
  BoundInputs in;
  in.T = 1000;
  in.n = 2;
  in.m = 1;
  in.K = 5;
  in.S = 2;
  in.alpha = 4.0;
  in.beta = 2.0;
  in.eta = 2.0;
  in.gaps = {0.1, 0.2, 0.3, 0.4};
  return in;
}

TEST(CheckParameters, PaperConfigurationIsValid) {
  const auto v = check_parameters(paper_inputs());
  EXPECT_TRUE(v.beta_ok);
  EXPECT_TRUE(v.eta_ok);
  EXPECT_DOUBLE_EQ(v.alpha_threshold, 2.75);  // (3 + (1 + 4)/2) / 2
  EXPECT_TRUE(v.alpha_ok);
  EXPECT_TRUE(v.gaps_ok);
  EXPECT_TRUE(v.sizes_ok);
  EXPECT_TRUE(v.theorem2_ok());
}

TEST(CheckParameters, IndividualConditionsFail) {
  auto in = paper_inputs();
  in.beta = 1.0;
  EXPECT_FALSE(check_parameters(in).beta_ok);
  EXPECT_FALSE(check_parameters(in).theorem2_ok());

  in = paper_inputs();
  in.eta = 1.0;
  EXPECT_FALSE(check_parameters(in).eta_ok);
  EXPECT_TRUE(check_parameters(in).beta_ok);

  in = paper_inputs();
  in.alpha = 2.75;  // strict inequality required
  EXPECT_FALSE(check_parameters(in).alpha_ok);

  in = paper_inputs();
  in.gaps[3] = in.gaps[2] - 0.01;  // not non-decreasing
  EXPECT_FALSE(check_parameters(in).gaps_ok);

  in = paper_inputs();
  in.gaps[0] = 0.0;  // not positive
  EXPECT_FALSE(check_parameters(in).gaps_ok);

  in = paper_inputs();
  in.gaps.pop_back();  // wrong count
  EXPECT_FALSE(check_parameters(in).gaps_ok);

  in = paper_inputs();
  in.n = 0;
  EXPECT_FALSE(check_parameters(in).sizes_ok);
}

TEST(Theorem2Leading, SmallConfigurationReference) {
  // blocked branch 59.5, all-arms branch 20.8333...: the min wins
  EXPECT_DOUBLE_EQ(theorem2_leading_coefficient(small_inputs()), 333.3333333333333);
}

TEST(Theorem2Leading, UnitGapsFirstBranch) {
  // m = 0, S = 1, eta = 2, unit gaps: 4 * alpha * (3 * 2 + 2) = 128
  BoundInputs in = small_inputs();
  in.m = 0;
  in.S = 1;
  in.K = 50;
  in.gaps.assign(49, 1.0);
  EXPECT_DOUBLE_EQ(theorem2_leading_coefficient(in), 128.0);
}

TEST(Theorem2Leading, SecondBranchWhenMaliciousCountExceedsArms) {
  // m >= K with equal gaps: min picks the all-arms branch 4a(K-1)/gap
  BoundInputs in = small_inputs();
  in.m = 5;
  in.S = 1;
  in.gaps.assign(4, 0.2);
  EXPECT_DOUBLE_EQ(theorem2_leading_coefficient(in), 320.0);
}

TEST(Theorem2Constant, PaperConfigurationReference) {
  // dominated by the first (double-exponential-looking) term
  expect_rel_near(theorem2_additive_constant(paper_inputs()), 7.355745547555377e+39);
}

TEST(Theorem2Constant, PositiveOnValidInputs) {
  for (const double alpha : {3.0, 4.0, 6.0}) {
    for (const double beta : {1.5, 2.0, 3.0}) {
      for (const double eta : {1.5, 2.0, 3.0}) {
        BoundInputs in = small_inputs();
        in.alpha = alpha;
        in.beta = beta;
        in.eta = eta;
        if (!check_parameters(in).theorem2_ok()) continue;
        const double c = theorem2_additive_constant(in);
        EXPECT_GT(c, 0.0) << "alpha=" << alpha << " beta=" << beta << " eta=" << eta;
        EXPECT_TRUE(std::isfinite(c));
      }
    }
  }
}

TEST(Theorem2Bound, SmallConfigurationReference) {
  const auto b = theorem2_upper_bound(small_inputs());
  ASSERT_TRUE(b.has_value());
  expect_rel_near(*b, 2.8700973477311788e+38);
}

TEST(Theorem2Bound, InvalidParametersYieldNothing) {
  auto in = small_inputs();
  in.alpha = 2.0;  // below the 2.75 threshold
  EXPECT_FALSE(theorem2_upper_bound(in).has_value());
  in = small_inputs();
  in.beta = 1.0;
  EXPECT_FALSE(theorem2_upper_bound(in).has_value());
  in = small_inputs();
  in.eta = 1.0;
  EXPECT_FALSE(theorem2_upper_bound(in).has_value());
}

TEST(Theorem2Bound, LeadingCoefficientIsTheLogSlope) {
  BoundInputs t1 = small_inputs();
  BoundInputs t2 = small_inputs();
  t1.T = 1000;
  t2.T = 100000;
  const double b1 = *theorem2_upper_bound(t1);
  const double b2 = *theorem2_upper_bound(t2);
  const double slope =
      (b2 - b1) / (std::log(static_cast<double>(t2.T)) - std::log(static_cast<double>(t1.T)));
  // C* cancels but is ~1e38, so the difference has little precision left
  EXPECT_NEAR(slope, theorem2_leading_coefficient(small_inputs()),
              1e-12 * theorem2_additive_constant(small_inputs()));
}

TEST(Theorem2Bound, MonotoneInMaliciousCountHorizonAndStickySize) {
  const auto bound_at = [](int m, int S, long long T) {
    BoundInputs in = small_inputs();
    in.m = m;
    in.S = S;
    in.T = T;
    const auto b = theorem2_upper_bound(in);
    EXPECT_TRUE(b.has_value());
    return *b;
  };
  double prev = bound_at(0, 2, 1000);
  for (int m = 1; m <= 6; ++m) {
    const double cur = bound_at(m, 2, 1000);
    EXPECT_GE(cur, prev) << "m = " << m;
    prev = cur;
  }
  prev = bound_at(1, 1, 1000);
  for (int S = 2; S <= 3; ++S) {
    const double cur = bound_at(1, S, 1000);
    EXPECT_GE(cur, prev) << "S = " << S;
    prev = cur;
  }
  prev = bound_at(1, 2, 100);
  for (long long T = 1000; T <= 10000000; T *= 10) {
    const double cur = bound_at(1, 2, T);
    EXPECT_GE(cur, prev) << "T = " << T;
    prev = cur;
  }
}

TEST(Theorem2Bound, NeverExceedsTheAllArmsBranch) {
  const auto in = small_inputs();
  double all_arms = 0.0;
  for (const double d : in.gaps) all_arms += 1.0 / d;
  const double cap = 4.0 * in.alpha * all_arms * std::log(static_cast<double>(in.T)) +
                     theorem2_additive_constant(in);
  EXPECT_LE(*theorem2_upper_bound(in), cap);
}

TEST(Theorem1Coefficient, ReferenceValues) {
  const std::vector<double> one = {0.1};
  ASSERT_TRUE(theorem1_lower_coefficient(4.0, one).has_value());
  EXPECT_DOUBLE_EQ(*theorem1_lower_coefficient(4.0, one), 10.0);

  const std::vector<double> three = {0.1, 0.2, 0.5};
  EXPECT_DOUBLE_EQ(*theorem1_lower_coefficient(4.0, three), 17.0);

  // alpha = 4 makes the prefactor exactly 1: coefficient = sum of 1/gap
  const std::vector<double> unit = {1.0};
  EXPECT_DOUBLE_EQ(*theorem1_lower_coefficient(2.0, unit), 0.17157287525381);
}

TEST(Theorem1Coefficient, DegenerateInputs) {
  const std::vector<double> gaps = {0.1};
  EXPECT_FALSE(theorem1_lower_coefficient(1.0, gaps).has_value());
  EXPECT_FALSE(theorem1_lower_coefficient(0.5, gaps).has_value());
  EXPECT_FALSE(theorem1_lower_coefficient(4.0, {}).has_value());
  const std::vector<double> bad = {0.1, 0.0};
  EXPECT_FALSE(theorem1_lower_coefficient(4.0, bad).has_value());
}

TEST(Theorem1Coefficient, VanishesTowardAlphaOne) {
  const std::vector<double> gaps = {0.1};
  double prev = *theorem1_lower_coefficient(1.0001, gaps);
  for (const double alpha : {1.01, 1.1, 1.5}) {
    const double cur = *theorem1_lower_coefficient(alpha, gaps);
    EXPECT_GT(cur, prev);
    prev = cur;
  }
  EXPECT_LT(*theorem1_lower_coefficient(1.0001, gaps), 0.01);
}

}  // namespace
}  // namespace gossipmab
