#include <gtest/gtest.h>

#include "test_util.hpp"
#include "volterra/sweeps.hpp"

using namespace volterra;

namespace {

const QuadratureConfig cfg{};

// int |1 - rho u|^{-2c} (1 - |u|^2)^t dV(u) over the disc, by expanding (1 - rho u)^{-c}
// and using orthogonality of u^k: sum ((c)_k / k!)^2 rho^{2k} B(k + 1, t + 1).
double discSeries(double rho, double c, double t) {
  double sum = 0.0, coef = 1.0;
  for (int k = 0; k < 20000; ++k) {
    const double moment = testutil::beta(k + 1.0, t + 1.0);
    const double term = coef * coef * std::pow(rho, 2 * k) * moment;
    sum += term;
    if (term < 1e-17 * sum && k > 10) break;
    coef *= (c + k) / (k + 1.0);
  }
  return sum;
}

double circleSeries(double rho, double c) {
  double sum = 0.0, coef = 1.0;
  for (int k = 0; k < 20000; ++k) {
    const double term = coef * coef * std::pow(rho, 2 * k);
    sum += term;
    if (term < 1e-17 * sum && k > 10) break;
    coef *= (c + k) / (k + 1.0);
  }
  return sum;
}

}  // namespace

TEST(LemmaNames, RoundTrip) {
  for (auto l : {KernelLemma::IctBnSphere, KernelLemma::IctBnBall, KernelLemma::DiscreteL2, KernelLemma::FRGeneral,
                 KernelLemma::GammaLemma}) {
    EXPECT_EQ(kernelLemmaFromString(toString(l)), l);
  }
  EXPECT_THROW(kernelLemmaFromString("nope"), ParameterError);
}

TEST(Hypotheses, Violations) {
  LemmaExponents e;
  e.s = 0.0;
  EXPECT_THROW(checkLemmaHypotheses(KernelLemma::IctBnSphere, e), ParameterError);
  e = {};
  e.t = -1.0;
  EXPECT_THROW(checkLemmaHypotheses(KernelLemma::IctBnBall, e), ParameterError);
  e = {};
  e.t = 2.0;
  e.s = 1.5;
  EXPECT_THROW(checkLemmaHypotheses(KernelLemma::DiscreteL2, e), ParameterError);
  e.s = 3.0;
  EXPECT_NO_THROW(checkLemmaHypotheses(KernelLemma::DiscreteL2, e));
  e.n = 2;
  EXPECT_THROW(checkLemmaHypotheses(KernelLemma::DiscreteL2, e), ParameterError);
  e = {};
  e.s = 0.0;
  e.r = 1.0;
  e.t = 1.0;
  EXPECT_THROW(checkLemmaHypotheses(KernelLemma::FRGeneral, e), ParameterError);
  e.r = 1.5;
  e.t = 1.5;
  EXPECT_NO_THROW(checkLemmaHypotheses(KernelLemma::FRGeneral, e));
  e = {};
  e.s = 0.5;
  e.theta = 1.5;
  EXPECT_THROW(checkLemmaHypotheses(KernelLemma::GammaLemma, e), ParameterError);
  e.theta = 2.5;
  EXPECT_NO_THROW(checkLemmaHypotheses(KernelLemma::GammaLemma, e));
}

TEST(SweepRadii, Defaults) {
  const auto r = sweepRadii(KernelLemma::IctBnBall);
  ASSERT_EQ(r.size(), 10u);
  EXPECT_NEAR(r[0], 0.0, 1e-15);
  EXPECT_NEAR(r[9], 1.0 - 1e-3, 1e-12);
  EXPECT_EQ(sweepRadii(KernelLemma::DiscreteL2).size(), 7u);
  EXPECT_EQ(sweepRadii(KernelLemma::GammaLemma).size(), 9u);
}

TEST(Sweep, SphereMatchesSeries) {
  LemmaExponents e;
  e.s = 1.5;
  const std::vector<double> radii{0.0, 0.5, 0.9, 0.99};
  const SweepTable t = kernelEstimateSweep(KernelLemma::IctBnSphere, e, cfg, radii);
  for (const auto& row : t.rows) {
    const double want = circleSeries(row.radius, (1.0 + e.s) / 2.0);
    EXPECT_NEAR(row.lhs / want, 1.0, 1e-7) << row.radius;
  }
}

TEST(Sweep, BallMatchesSeries) {
  for (double t : {0.0, 1.0, -0.5}) {
    LemmaExponents e;
    e.s = 1.0;
    e.t = t;
    const std::vector<double> radii{0.0, 0.5, 0.9, 0.99};
    const SweepTable table = kernelEstimateSweep(KernelLemma::IctBnBall, e, cfg, radii);
    for (const auto& row : table.rows) {
      const double want = discSeries(row.radius, (2.0 + t + e.s) / 2.0, t);
      EXPECT_NEAR(row.lhs / want, 1.0, 1e-6) << "t=" << t << " rho=" << row.radius;
      EXPECT_NEAR(row.ratio, row.lhs / row.majorant, 1e-12 * row.ratio);
    }
  }
}

TEST(Sweep, EstimatesHoldWithoutDivergence) {
  LemmaExponents ball;
  ball.s = 1.0;
  ball.t = 0.5;
  LemmaExponents fr;
  fr.s = 0.0;
  fr.r = 1.5;
  fr.t = 1.5;
  LemmaExponents l2;
  l2.t = 2.0;
  l2.s = 3.0;
  for (const auto& [lemma, e] : {std::pair{KernelLemma::IctBnBall, ball}, std::pair{KernelLemma::FRGeneral, fr},
                                 std::pair{KernelLemma::DiscreteL2, l2}}) {
    const SweepTable t = kernelEstimateSweep(lemma, e, cfg);
    EXPECT_FALSE(t.monotoneDivergence) << toString(lemma);
    EXPECT_LT(t.maxRatio, 100.0) << toString(lemma);
  }
}

TEST(Sweep, FailingHypothesisIsRejected) {
  LemmaExponents e;
  e.s = -1.0;
  EXPECT_THROW(kernelEstimateSweep(KernelLemma::IctBnSphere, e, cfg), ParameterError);
}

TEST(MonotoneDivergence, Detector) {
  EXPECT_TRUE(monotoneDivergence({1, 2, 3, 4, 5}));
  EXPECT_TRUE(monotoneDivergence({0.5, 1, 2, 3, 4, 5}));
  EXPECT_FALSE(monotoneDivergence({1, 1.5, 1.75, 1.875, 1.9375}));
  EXPECT_FALSE(monotoneDivergence({1, 2, 3, 2.5, 5}));
  EXPECT_FALSE(monotoneDivergence({1, 1.001, 1.002, 1.003, 1.004}));
}
