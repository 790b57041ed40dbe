#include <gtest/gtest.h>

#include <cmath>

#include "isop/bounds.hpp"
#include "oracles.hpp"

using namespace isop;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

const double kE2over3 = std::exp(2.0) / 3.0;

}  // namespace

TEST(Theorem1Bound, Z2SizeFive) {
  auto t = enumerate_ball(FreeAbelianGroup(2), 4);
  EXPECT_EQ(theorem1_bound_exact(5, Rational(2), t), Rational(5, 4));
  EXPECT_DOUBLE_EQ(theorem1_bound(5, Rational(2), t), 1.25);
}

TEST(Theorem1Bound, FreeTwoSizeFive) {
  auto t = enumerate_ball(FreeGroup(2), 4);
  EXPECT_EQ(theorem1_bound_exact(5, Rational(3), t), Rational(5, 3));
}

TEST(Theorem1Bound, VanishesAsLambdaApproachesOne) {
  auto t = enumerate_ball(FreeAbelianGroup(2), 4);
  double prev = 1e9;
  for (int k = 1; k <= 8; ++k) {
    Rational lambda = 1 + Rational(1, BigInt(10) * k * k * k);
    double b = theorem1_bound(5, lambda, t);
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Theorem1Bound, Errors) {
  auto t = enumerate_ball(FreeAbelianGroup(2), 2);
  EXPECT_THROW(theorem1_bound_exact(5, Rational(1), t), DomainError);
  EXPECT_THROW(theorem1_bound_exact(5, Rational(3), t), InsufficientDepthError);
  auto c = enumerate_ball_exceeding(CyclicGroup(8), 8);
  EXPECT_NO_THROW(theorem1_bound_exact(4, Rational(2), c));
  EXPECT_THROW(theorem1_bound_exact(4, Rational(201, 100), c), DomainError);
}

TEST(BestLambdaDiscrete, Z2SizeFive) {
  auto t = enumerate_ball(FreeAbelianGroup(2), 3);
  auto best = best_lambda_discrete(5, t);
  EXPECT_EQ(best.lambda, Rational(13, 5));
  EXPECT_EQ(best.bound, Rational(8, 13) * 5 / 2);
  EXPECT_EQ(best.radius, 2);
  EXPECT_LT(theorem1_bound_exact(5, Rational(5), t), best.bound);
}

TEST(BestLambdaDiscrete, SingletonPicksRadiusOne) {
  for (const char* spec : {"Z:1", "Z:2", "free:2", "heisenberg"}) {
    auto t = enumerate_ball(Group(parse_group_spec(spec)), 5);
    auto best = best_lambda_discrete(1, t);
    EXPECT_EQ(best.radius, 1) << spec;
    EXPECT_EQ(best.lambda, Rational(t.gamma(1))) << spec;
  }
}

TEST(BestLambdaDiscrete, DominatesEveryCandidate) {
  auto t = enumerate_ball(HeisenbergGroup(), 6);
  for (std::uint64_t size : {1u, 3u, 10u, 40u, 100u}) {
    auto best = best_lambda_discrete(size, t);
    for (int i = 1; i <= 400; ++i) {
      Rational lambda = 1 + Rational(i, 40);
      if (lambda * size > Rational(t.gamma().back())) break;
      EXPECT_GE(best.bound, theorem1_bound_exact(size, lambda, t));
    }
  }
}

TEST(BestLambdaDiscrete, WholeFiniteGroupHasNoLambda) {
  auto t = enumerate_ball_exceeding(CyclicGroup(6), 6);
  EXPECT_THROW(best_lambda_discrete(6, t), DomainError);
  auto ok = best_lambda_discrete(3, t);
  EXPECT_LE(ok.lambda, Rational(2));
}

TEST(NumericSup, PolynomialMatchesClosedForm) {
  auto n = numeric_F_sup(PolynomialGrowth{1, 2}, 100);
  auto c = closed_form_poly(1, 2, 100);
  EXPECT_LT(rel(n.F, c.F), 1e-9);
  EXPECT_NEAR(n.lambda_star, 3, 1e-6);
  EXPECT_EQ(n.method, BoundMethod::NumericSup);
}

TEST(NumericSup, StretchedExpAtKnownPoint) {
  auto n = numeric_F_sup(StretchedExpGrowth{1, 1, 1}, kE2over3);
  EXPECT_NEAR(n.lambda_star, 3, 1e-6);
  EXPECT_LT(n.stationarity_residual, 1e-6);
}

TEST(NumericSup, LinearGrowthGivesQuarter) {
  for (double v : {2.0, 10.0, 1000.0, 1e6}) {
    auto n = numeric_F_sup(PolynomialGrowth{1, 1}, v);
    EXPECT_NEAR(n.F, 0.25, 1e-12) << v;
    EXPECT_NEAR(n.lambda_star, 2, 1e-6) << v;
  }
  EXPECT_NEAR(numeric_F_sup(PolynomialGrowth{3, 1}, 50).F, 0.75, 1e-12);
}

TEST(NumericSup, AgreesWithGridScan) {
  const GrowthLowerBound specs[] = {PolynomialGrowth{0.5, 3}, PolynomialGrowth{2, 1.5}, StretchedExpGrowth{1, 0.7, 0.5},
                                    StretchedExpGrowth{0.3, 1.1, 1}};
  for (const auto& s : specs) {
    for (double v : {50.0, 5000.0}) {
      auto n = numeric_F_sup(s, v);
      auto g = oracle::grid_sup(
          [&](double lambda) { return (1 - 1 / lambda) * v / growth_bound_inverse(s, lambda * v); }, 1.0 + 1e-9, 200.0);
      EXPECT_LT(rel(n.F, g.value), 1e-9);
    }
  }
}

TEST(NumericSup, DomainErrors) {
  EXPECT_THROW(numeric_F_sup(StretchedExpGrowth{2, 1, 1}, 1.5), DomainError);
  EXPECT_THROW(numeric_F_sup(PolynomialGrowth{1, 2}, -1), DomainError);
  EXPECT_THROW(numeric_F_sup(PolynomialGrowth{0, 2}, 10), DomainError);
  EXPECT_THROW(numeric_F_sup(StretchedExpGrowth{1, 1, 1.5}, 10), DomainError);
}

TEST(ClosedFormPoly, Examples) {
  for (double v : {1.0, 7.0, 1e3, 1e9}) {
    auto c = closed_form_poly(1, 1, v);
    EXPECT_DOUBLE_EQ(c.F, 0.25);
    EXPECT_EQ(c.lambda_star, 2);
  }
  EXPECT_NEAR(closed_form_poly(1, 2, 64).F, 16 / std::pow(3.0, 1.5), 1e-12);
  auto heis = closed_form_poly(31.0 / 625.0, 4, 500);
  EXPECT_GT(heis.F, 0);
  EXPECT_EQ(heis.method, BoundMethod::ClosedForm);
  EXPECT_LT(heis.stationarity_residual, 1e-6);
  EXPECT_LT(heis.defining_residual, 1e-15);
}

TEST(ClosedFormPoly, GridAgainstNumericSup) {
  for (double C : {0.25, 1.0, 3.0})
    for (double d : {1.0, 2.0, 3.5, 5.0})
      for (double v : {10.0, 1e4}) {
        auto c = closed_form_poly(C, d, v);
        auto n = numeric_F_sup(PolynomialGrowth{C, d}, v);
        EXPECT_LT(rel(c.F, n.F), 1e-9) << C << " " << d << " " << v;
        EXPECT_NEAR(n.lambda_star, d + 1, 1e-6 * (d + 1));
      }
}

TEST(LambdaOfV, Examples) {
  EXPECT_NEAR(lambda_of_v({1, 1, 1}, kE2over3), 3, 1e-12);
  EXPECT_NEAR(lambda_of_v({1, 1, 1}, 1.0), 1, 1e-7);
  EXPECT_NEAR(lambda_threshold({1, 1, 1}), 1, 0);
  const StretchedExpGrowth half{1, 1, 0.5};
  EXPECT_THROW(lambda_of_v(half, 0.9 * lambda_threshold(half)), DomainError);
  try {
    lambda_of_v(half, 0.1);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("0.735"), std::string::npos);  // 2 e^{-1}
  }
}

TEST(LambdaOfV, ResidualAndRoundTrip) {
  for (const StretchedExpGrowth& e : {StretchedExpGrowth{1, 1, 1}, StretchedExpGrowth{0.4, 2, 0.3}, StretchedExpGrowth{5, 1, 0.8}}) {
    for (double lambda : {1.5, 2.0, 4.0, 10.0, 50.0}) {
      if (lambda < e.alpha) continue;
      // forward: v = (C / lambda) e^{(lambda - 1)/alpha}
      double v = e.C / lambda * std::exp((lambda - 1) / e.alpha);
      auto s = solve_lambda(e, v);
      EXPECT_LE(std::fabs(s.residual), 1e-10);
      EXPECT_NEAR(s.lambda, lambda, 1e-9 * lambda);
    }
  }
}

TEST(LambdaOfV, AsymptoticSlope) {
  double prev_gap = 1;
  for (int k = 4; k <= 12; k += 4) {
    double v = std::pow(10.0, k * 10);
    double ratio = lambda_of_v({1, 1, 0.5}, v) / std::log(v);
    double gap = std::fabs(ratio - 0.5);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 0.05);
}

TEST(MuOfV, KnownPoint) {
  const double expected = (2.0 / 3.0) / (1 + std::log(3.0) / (2 - std::log(3.0)));
  EXPECT_NEAR(mu_of_v({1, 1, 1}, kE2over3), expected, 1e-12);
  EXPECT_NEAR(expected, 0.3005, 1e-4);
}

TEST(MuOfV, ExplicitFormAgrees) {
  for (const StretchedExpGrowth& e : {StretchedExpGrowth{1, 1, 1}, StretchedExpGrowth{0.5, 1, 0.5}, StretchedExpGrowth{2, 3, 0.25}}) {
    for (double v : {10.0, 1e3, 1e8}) {
      auto m = evaluate_mu(e, v);
      EXPECT_LT(m.agreement, 1e-9);
    }
  }
}

TEST(MuOfV, UnexponentiatedFormDiffers) {
  auto m = evaluate_mu({1, 1, 0.5}, 1000);
  EXPECT_GT(rel(m.mu, m.mu_unexponentiated), 1e-3);
}

TEST(MuOfV, IncreasesTowardOne) {
  double prev = 0;
  for (int k = 2; k <= 12; ++k) {
    double mu = mu_of_v({1, 1, 1}, std::pow(10.0, k));
    EXPECT_GT(mu, prev);
    EXPECT_LT(mu, 1);
    prev = mu;
  }
  EXPECT_GT(prev, 0.85);
}

TEST(MuOfV, MatchesNumericSup) {
  for (int k = 2; k <= 6; ++k) {
    double v = std::pow(10.0, k);
    auto n = numeric_F_sup(StretchedExpGrowth{1, 1, 1}, v);
    ASSERT_TRUE(n.mu);
    EXPECT_LT(rel(*n.mu, mu_of_v({1, 1, 1}, v)), 1e-6);
  }
}

TEST(ClosedFormExp, KnownPoint) {
  auto c = closed_form_exp({1, 1, 1}, kE2over3);
  EXPECT_NEAR(c.F, 0.3005 * kE2over3 / std::log(kE2over3), 1e-3);
  EXPECT_NEAR(c.F, 0.8210062, 1e-6);
  EXPECT_NEAR(c.lambda_star, 3, 1e-12);
  EXPECT_EQ(c.method, BoundMethod::LambertW);
  EXPECT_LT(c.defining_residual, 1e-12);
}

TEST(ClosedFormExp, AgreesWithNumericSup) {
  for (const StretchedExpGrowth& e : {StretchedExpGrowth{1, 1, 1}, StretchedExpGrowth{1.0 / 3, std::log(3.0), 1}, StretchedExpGrowth{0.7, 0.5, 0.5}}) {
    for (double v : {5.0, 100.0, 1e5}) {
      auto c = closed_form_exp(e, v);
      auto n = numeric_F_sup(e, v);
      EXPECT_LT(rel(c.F, n.F), 1e-9);
      EXPECT_NEAR(c.lambda_star, n.lambda_star, 1e-5 * c.lambda_star);
    }
  }
}

TEST(ClosedFormExp, DomainErrors) {
  EXPECT_THROW(closed_form_exp({1, 1, 1}, 1.0), DomainError);
  EXPECT_THROW(closed_form_exp({4, 1, 1}, 3.0), DomainError);
}

TEST(GrowthHypothesis, ExactPolynomial) {
  auto t = enumerate_ball(FreeAbelianGroup(1), 20);
  EXPECT_TRUE(check_growth_hypothesis(t, PolynomialGrowth{1, 1}).holds);
  EXPECT_FALSE(check_growth_hypothesis(t, PolynomialGrowth{2, 1}).holds);
  auto fail = check_growth_hypothesis(t, PolynomialGrowth{1.5, 1});
  EXPECT_FALSE(fail.holds);
  EXPECT_EQ(fail.failing.front(), 1);
}

TEST(GrowthHypothesis, FittedConstantsAreTight) {
  auto z2 = enumerate_ball(FreeAbelianGroup(2), 12);
  auto fit = fit_polynomial_constant(z2, 2);
  EXPECT_EQ(fit.exact, Rational(1));
  EXPECT_TRUE(check_growth_hypothesis(z2, PolynomialGrowth{fit.value, 2}).holds);
  EXPECT_FALSE(check_growth_hypothesis(z2, PolynomialGrowth{std::nextafter(fit.value, 2.0), 2}).holds);

  auto heis = enumerate_ball(HeisenbergGroup(), 8);
  auto hfit = fit_polynomial_constant(heis, 4);
  EXPECT_TRUE(check_growth_hypothesis(heis, PolynomialGrowth{hfit.value, 4}).holds);
  EXPECT_FALSE(check_growth_hypothesis(heis, PolynomialGrowth{std::nextafter(hfit.value, 2.0), 4}).holds);

  auto f2 = enumerate_ball(FreeGroup(2), 8);
  auto efit = fit_exponential_constant(f2, std::log(3.0), 1);
  EXPECT_NEAR(efit.value, 1.0 / 3, 1e-9);
  EXPECT_TRUE(check_growth_hypothesis(f2, StretchedExpGrowth{efit.value, std::log(3.0), 1}).holds);
  EXPECT_FALSE(check_growth_hypothesis(f2, StretchedExpGrowth{1, std::log(3.0), 1}).holds);
}
