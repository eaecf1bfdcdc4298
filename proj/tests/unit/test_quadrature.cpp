#include <gtest/gtest.h>

#include "test_util.hpp"
#include "volterra/quadrature.hpp"

using namespace volterra;
using testutil::kPi;

namespace {

QuadratureConfig cfg1() { return QuadratureConfig{}; }

QuadratureConfig cfg2() {
  QuadratureConfig c;
  c.dimension = 2;
  c.angularNodes = 64;
  return c;
}

}  // namespace

TEST(Config, Validation) {
  QuadratureConfig c;
  EXPECT_NO_THROW(c.validate());
  c.angularNodes = 32;
  EXPECT_THROW(c.validate(), ParameterError);
  c = QuadratureConfig{};
  c.maxRadius = 0.5;
  EXPECT_THROW(c.validate(), ParameterError);
  EXPECT_NO_THROW(c.validateNodes());
  c = QuadratureConfig{};
  c.dimension = 3;
  EXPECT_THROW(c.validate(), ParameterError);
  const QuadratureConfig r = QuadratureConfig{}.refined();
  EXPECT_EQ(r.radialNodes, 64);
  EXPECT_EQ(r.angularNodes, 256);
}

TEST(GaussJacobi, IntegratesPolynomialsExactly) {
  for (double a : {0.0, -0.5, 1.5}) {
    for (double b : {0.0, 1.0, 3.0}) {
      const Rule1D rule = gaussJacobi(12, a, b);
      for (int k = 0; k <= 20; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(0.5 * (1 + rule.nodes[i]), k);
        // int_{-1}^{1} ((1+x)/2)^k (1-x)^a (1+x)^b dx = 2^{a+b+1} B(k+b+1, a+1)
        const double want = std::pow(2.0, a + b + 1) * testutil::beta(k + b + 1, a + 1);
        EXPECT_NEAR(s, want, 1e-12 * want) << "a=" << a << " b=" << b << " k=" << k;
      }
    }
  }
}

TEST(SphereIntegrate, Oracles) {
  EXPECT_NEAR(sphereIntegrate([](const CVec&) { return 1.0; }, cfg1()), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(sphereIntegrate([](const CVec& x) { return x[0]; }, cfg1())), 0.0, 1e-12);
  const double v = sphereIntegrate([](const CVec& x) { return std::pow(std::abs(1.0 - 0.5 * x[0]), -2.0); }, cfg1());
  EXPECT_NEAR(v, 4.0 / 3.0, 1e-8);
  EXPECT_NEAR(sphereIntegrate([](const CVec&) { return 1.0; }, cfg2()), 1.0, 1e-12);
  // |xi_1|^2 has mean 1/n on S^{2n-1}.
  EXPECT_NEAR(sphereIntegrate([](const CVec& x) { return std::norm(x[0]); }, cfg2()), 0.5, 1e-10);
}

TEST(SphereIntegrateAdaptive, PeakedPoissonKernel) {
  for (double r : {0.99, 0.999}) {
    const RealFn g = [r](const CVec& x) { return (1 - r * r) / std::norm(1.0 - r * x[0]); };
    const auto res = sphereIntegrateAdaptive(g, 1, 1e-10);
    EXPECT_TRUE(res.converged);
    EXPECT_NEAR(res.value, 1.0, 1e-8);
  }
}

TEST(BallIntegrate, NormalizedForEveryAlpha) {
  for (double a : {-0.5, 0.0, 1.0, 3.7}) {
    EXPECT_NEAR(ballIntegrate([](const CVec&) { return 1.0; }, a, cfg1()), 1.0, 1e-10);
    EXPECT_NEAR(ballIntegrate([](const CVec&) { return 1.0; }, a, cfg2()), 1.0, 1e-10);
  }
}

TEST(BallIntegrate, RadialMomentsMatchBeta) {
  EXPECT_NEAR(ballIntegrate([](const CVec& z) { return z.normSq(); }, 0.0, cfg1()), 0.5, 1e-10);
  for (double a : {0.0, 1.0, -0.5}) {
    for (double k : {0.5, 1.0, 2.5, 7.0}) {
      // int |z|^{2k} dV_alpha = B(k+1, alpha+1) / B(1, alpha+1) for n = 1.
      const double want = testutil::beta(k + 1, a + 1) / testutil::beta(1, a + 1);
      EXPECT_NEAR(ballIntegrate([k](const CVec& z) { return std::pow(z.normSq(), k); }, a, cfg1()), want, 1e-10)
          << "alpha=" << a << " k=" << k;
    }
  }
  // B_2: |z_1|^2 has mean 1/(n+1) under dV.
  EXPECT_NEAR(ballIntegrate([](const CVec& z) { return std::norm(z[0]); }, 0.0, cfg2()), 1.0 / 3.0, 1e-10);
}

TEST(BallIntegrate, NonFiniteIntegrandNamesNode) {
  EXPECT_THROW(ballIntegrate([](const CVec&) { return std::nan(""); }, 0.0, cfg1()), NonFiniteError);
  EXPECT_THROW(ballIntegrate([](const CVec&) { return 1.0; }, -1.0, cfg1()), DomainError);
}

TEST(BergmanWeight, Constant) {
  EXPECT_NEAR(bergmanWeightConstant(1, 0.0), 1.0, 1e-14);
  EXPECT_NEAR(bergmanWeightConstant(1, 2.0), 3.0, 1e-12);
  // c(2, 1) = Gamma(4) / (Gamma(3) Gamma(2)) = 3.
  EXPECT_NEAR(bergmanWeightConstant(2, 1.0), 3.0, 1e-12);
}

TEST(RegionNodes, WholeBallHasUnitVolume) {
  const NodeSet nodes = regionNodes(wholeBallRegion(SpherePoint::fromAngle(0.3)), cfg1());
  double s = 0.0;
  for (double w : nodes.weights) s += w;
  EXPECT_NEAR(s, 1.0, 1e-10);
  const double m = integrateNodes(nodes, [](const CVec& z) { return z.normSq(); });
  EXPECT_NEAR(m, 0.5, 1e-9);
}

TEST(KoranyiIntegrate, ZeroAndApertureMonotonicity) {
  const SpherePoint xi = SpherePoint::fromAngle(0.0);
  const RealFn zero = [](const CVec&) { return 0.0; };
  EXPECT_EQ(koranyiIntegrate(zero, xi, Aperture(2.0), 0.0, cfg1()), 0.0);
  const RealFn g = [](const CVec& z) { return 1.0 + std::norm(z[0] - 0.3); };
  EXPECT_LE(koranyiIntegrate(g, xi, Aperture(2.0), -1.0, cfg1()), koranyiIntegrate(g, xi, Aperture(4.0), -1.0, cfg1()));
}

TEST(KoranyiIntegrate, AreaMatchesMonteCarlo) {
  const QuadratureConfig c = cfg1();
  const double area = koranyiIntegrate([](const CVec&) { return 1.0; }, SpherePoint::fromAngle(0.0), Aperture(2.0), 0.0, c);
  const auto pts = testutil::randomDiscPoints(2'000'000, 1.0, 17);
  std::size_t inside = 0;
  for (const auto& z : pts) inside += (z.norm() < c.maxRadius && inKoranyi(z, CVec(cplx(1.0)), 2.0)) ? 1 : 0;
  const double mc = static_cast<double>(inside) / pts.size();
  EXPECT_NEAR(area / mc, 1.0, 0.02);
}

TEST(KoranyiIntegrate, RegionAndMaskedRoutesAgree) {
  QuadratureConfig c = cfg1();
  c.maxRadius = 0.9;
  c.radialNodes = 128;
  c.angularNodes = 1024;
  const RealFn g = [](const CVec& z) { return std::norm(z[0]); };
  const SpherePoint xi = SpherePoint::fromAngle(0.0);
  const double exact = koranyiIntegrate(g, xi, Aperture(3.0), 0.0, c);
  const MaskedIntegral masked = koranyiIntegrateMasked(g, xi, Aperture(3.0), 0.0, c);
  EXPECT_GT(masked.nodesInside, 100);
  EXPECT_NEAR(masked.value / exact, 1.0, 0.05);
}

TEST(KoranyiIntegrate, RotationInvariantForRadialIntegrand) {
  const RealFn g = [](const CVec& z) { return z.normSq(); };
  const double a = koranyiIntegrate(g, SpherePoint::fromAngle(0.0), Aperture(2.0), -1.0, cfg1());
  for (double t : {0.5, 2.0, 4.0}) {
    EXPECT_NEAR(koranyiIntegrate(g, SpherePoint::fromAngle(t), Aperture(2.0), -1.0, cfg1()), a, 1e-10 * a);
  }
}

TEST(FubiniTentCheck, ConstantIntegrandInBand) {
  const FubiniRatio r = fubiniTentCheck([](const CVec&) { return 1.0; }, 0.0, cfg1());
  EXPECT_GT(r.ratio, 0.2);
  EXPECT_LT(r.ratio, 5.0);
}

TEST(FubiniTentCheck, ZeroIntegrandIsDegenerate) {
  EXPECT_THROW(fubiniTentCheck([](const CVec&) { return 0.0; }, 0.0, cfg1()), ParameterError);
}

TEST(FubiniTentCheck, StableUnderGridDoubling) {
  const RealFn g = [](const CVec& z) { return std::norm(z[0]); };
  const double a = fubiniTentCheck(g, 1.0, cfg1()).ratio;
  const double b = fubiniTentCheck(g, 1.0, cfg1().refined()).ratio;
  EXPECT_NEAR(a / b, 1.0, 0.3);
}

TEST(GridSup, Constant) {
  const SupResult s = gridSup([](const CVec&) { return 2.5; }, cfg1());
  EXPECT_EQ(s.value, 2.5);
  EXPECT_TRUE(s.converged);
}

TEST(GridSup, InteriorMaximum) {
  const SupResult s = gridSup([](const CVec& z) { return z.norm() * (1.0 - z.normSq()); }, cfg1());
  EXPECT_NEAR(s.value, 2.0 / (3.0 * std::sqrt(3.0)), 1e-5);
  EXPECT_TRUE(s.converged);
  EXPECT_NEAR(s.argmax.norm(), 1.0 / std::sqrt(3.0), 1e-2);
}

TEST(GridSup, UnboundedFunctionFlagged) {
  const RealFn g = [](const CVec& z) { return 1.0 / (1.0 - z.normSq()); };
  double prev = 0.0;
  for (double m : {0.99, 0.995, 0.999}) {
    const SupResult s = gridSup(g, cfg1().withMaxRadius(m));
    EXPECT_GT(s.value, prev);
    EXPECT_FALSE(s.converged);
    EXPECT_TRUE(s.atCutoff);
    prev = s.value;
  }
}

TEST(BoundaryLimit, SaturatingAndDivergent) {
  const auto radii = cutoffLadder(0.999);
  ASSERT_EQ(radii.size(), 3u);
  EXPECT_NEAR(radii[0], 0.99, 1e-12);
  EXPECT_NEAR(radii[2], 0.999, 1e-12);
  std::vector<double> sat, logv;
  for (double r : radii) {
    sat.push_back(2.0 - (1.0 - r));
    logv.push_back(std::log(1.0 / (1.0 - r)));
  }
  const BoundaryLimit a = boundaryLimit(radii, sat);
  EXPECT_TRUE(a.converged);
  EXPECT_NEAR(a.value, 2.0, 1e-9);
  EXPECT_FALSE(boundaryLimit(radii, logv).converged);
}
