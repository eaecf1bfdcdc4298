#include <gtest/gtest.h>

#include "test_util.hpp"
#include "volterra/operator.hpp"

using namespace volterra;

namespace {

const QuadratureConfig cfg{};

std::vector<Symbol> symbols() {
  std::mt19937_64 rng(9);
  return {Symbol::polynomial(testutil::randomCoefficients(5, rng)), Symbol::kernel(BallPoint(cplx(0.5, -0.3)), 1.5),
          Symbol::logKernel(CVec::unit(1)), Symbol::lacunary({1.0, 0.5, 0.25}, 2)};
}

}  // namespace

TEST(ApplyJb, ConstantSymbolGivesZero) {
  const Symbol b = Symbol::constant(1, cplx(2.0, 1.0));
  for (const auto& z : testutil::randomDiscPoints(10, 0.9, 1)) {
    EXPECT_EQ(applyJb(b, Symbol::polynomial({1.0, 3.0}), z), cplx(0.0));
  }
}

TEST(ApplyJb, MonomialClosedForm) {
  const Symbol b = Symbol::monomial(MultiIndex(1));
  for (int k = 0; k < 6; ++k) {
    for (const auto& z : testutil::randomDiscPoints(5, 0.95, 2 + k)) {
      const cplx want = std::pow(z[0], k + 1) / (k + 1.0);
      EXPECT_NEAR(std::abs(applyJb(b, Symbol::monomial(MultiIndex(k)), z) - want), 0.0, 1e-13);
    }
  }
}

TEST(ApplyJb, ActingOnOneRecoversSymbol) {
  const Symbol one = Symbol::constant(1, 1.0);
  const CVec origin = CVec::zero(1);
  for (const auto& b : symbols()) {
    for (const auto& z : testutil::randomDiscPoints(10, 0.95, 3)) {
      const cplx want = b(z) - b(origin);
      EXPECT_NEAR(std::abs(applyJb(b, one, z) - want), 0.0, 1e-10 * std::max(1.0, std::abs(want))) << b.describe();
    }
  }
}

TEST(ApplyJb, TwoVariables) {
  // b = z_1 z_2, f = 1: J_b 1 = b.
  const Symbol b = Symbol::powerSeries(2, {{MultiIndex(1, 1), 1.0}});
  const CVec z(cplx(0.3, 0.2), cplx(-0.4, 0.1));
  EXPECT_NEAR(std::abs(applyJb(b, Symbol::constant(2, 1.0), z) - z[0] * z[1]), 0.0, 1e-13);
}

TEST(JbExact, MatchesQuadrature) {
  std::mt19937_64 rng(10);
  const Symbol b = Symbol::polynomial(testutil::randomCoefficients(4, rng));
  const Symbol f = Symbol::polynomial(testutil::randomCoefficients(3, rng));
  const auto exact = jbExact(b, f);
  ASSERT_TRUE(exact.has_value());
  for (const auto& z : testutil::randomDiscPoints(20, 0.95, 4)) {
    EXPECT_NEAR(std::abs((*exact)(z) - applyJb(b, f, z)), 0.0, 1e-12);
  }
  EXPECT_FALSE(jbExact(Symbol::logKernel(CVec::unit(1)), f).has_value());
}

TEST(RadialIdentity, ResidualSmall) {
  const auto syms = symbols();
  for (const auto& b : syms) {
    for (const auto& f : {Symbol::constant(1, 1.0), Symbol::polynomial({0.5, -1.0, 2.0}), syms[1]}) {
      EXPECT_LT(radialIdentityResidual(b, f, cfg), 1e-6) << b.describe() << " / " << f.describe();
    }
  }
  EXPECT_EQ(interiorGrid(1).size(), 100u);
  EXPECT_EQ(interiorGrid(2).size(), 100u);
}

TEST(OpNorm, ConstantSymbolIsZero) {
  const OpNormBound r = opNormLowerBound(Symbol::constant(1, 5.0), SpaceParams{}, defaultProbes(), cfg);
  EXPECT_EQ(r.value, 0.0);
}

TEST(OpNorm, MonomialProbesForIdentitySymbol) {
  // b = z, p = q = 2: ||J_b z^k||_{H^2} / ||z^k||_{A^2} = 1 / sqrt(k + 1).
  const OpNormBound r =
      opNormLowerBound(Symbol::monomial(MultiIndex(1)), SpaceParams{}, std::vector<ProbeFamily>{Monomials{6}}, cfg);
  EXPECT_NEAR(r.value, 1.0, 1e-8);
  ASSERT_EQ(r.rows.size(), 7u);
  for (std::size_t k = 0; k < r.rows.size(); ++k) EXPECT_NEAR(r.rows[k].ratio, 1.0 / std::sqrt(k + 1.0), 1e-8);
}

TEST(OpNorm, LinearInSymbol) {
  const Symbol b = Symbol::kernel(BallPoint(cplx(0.6)), 1.0);
  const SpaceParams sp{1, 2.0, 4.0, 0.0, Aperture(2.0)};
  const std::vector<ProbeFamily> probes{Monomials{3}};
  const double one = opNormLowerBound(b, sp, probes, cfg).value;
  EXPECT_GT(one, 0.0);
  EXPECT_NEAR(opNormLowerBound(b * cplx(0.0, 3.0), sp, probes, cfg).value, 3.0 * one, 1e-8 * one);
}

TEST(OpNorm, RejectsEmptyProbeSet) {
  EXPECT_THROW(opNormLowerBound(Symbol::monomial(MultiIndex(1)), SpaceParams{}, std::vector<Probe>{}, cfg),
               ParameterError);
  EXPECT_THROW(opNormLowerBound(Symbol::monomial(MultiIndex(1)), SpaceParams{}, std::vector<ProbeFamily>{}, cfg),
               ParameterError);
}

TEST(Probes, ExpansionIsDeterministic) {
  const Symbol b = Symbol::monomial(MultiIndex(1));
  const auto a = expandProbes(RandomPolynomials{5, 4, 7}, b, SpaceParams{});
  const auto c = expandProbes(RandomPolynomials{5, 4, 7}, b, SpaceParams{});
  ASSERT_EQ(a.size(), 5u);
  const CVec z(cplx(0.3, 0.4));
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].f(z), c[k].f(z));
  EXPECT_EQ(expandProbes(Monomials{8}, b, SpaceParams{}).size(), 9u);
  // Three radii, eight directions plus the peak direction when the symbol has one.
  EXPECT_GE(expandProbes(NecessityKernels{}, b, SpaceParams{}).size(), 24u);
}
