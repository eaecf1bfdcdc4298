#include <gtest/gtest.h>

#include "test_util.hpp"
#include "volterra/criteria.hpp"

using namespace volterra;

namespace {

const QuadratureConfig cfg{};

SpaceParams params(double p, double q, double alpha = 0.0, int n = 1) {
  SpaceParams s;
  s.n = n;
  s.p = p;
  s.q = q;
  s.alpha = alpha;
  return s;
}

}  // namespace

TEST(ClassifyRegime, Interiors) {
  EXPECT_EQ(classifyRegime(1.0, 2.0).label, RegimeLabel::Item1);
  EXPECT_EQ(classifyRegime(3.0, 5.0).label, RegimeLabel::Item1);
  EXPECT_EQ(classifyRegime(3.0, 3.0).label, RegimeLabel::Item2);
  EXPECT_EQ(classifyRegime(4.0, 2.0).label, RegimeLabel::Item3);
  EXPECT_EQ(classifyRegime(4.0, 6.0).label, RegimeLabel::Item1);
  EXPECT_EQ(classifyRegime(1.5, 1.0).label, RegimeLabel::Item4);
  EXPECT_THROW(classifyRegime(0.0, 1.0), ParameterError);
  EXPECT_THROW(classifyRegime(1.0, -1.0), ParameterError);
}

TEST(ClassifyRegime, BoundaryAssignments) {
  EXPECT_EQ(classifyRegime(2.0, 2.0).label, RegimeLabel::Item1);
  EXPECT_EQ(classifyRegime(1.0, 1.0).label, RegimeLabel::Item1);
  EXPECT_EQ(classifyRegime(2.0, 3.0).label, RegimeLabel::Item1);
  EXPECT_EQ(classifyRegime(2.0, 1.0).label, RegimeLabel::Item4);
  EXPECT_NE(classifyRegime(2.0, 1.0).boundaryRule.find("Item4"), std::string::npos);
  EXPECT_EQ(classifyRegime(2.5, 2.0).label, RegimeLabel::Item3);
}

TEST(ClassifyRegime, PartitionProperty) {
  // Independent restatement of the four regions; exactly one must hold.
  for (int i = 1; i <= 60; ++i) {
    for (int j = 1; j <= 60; ++j) {
      const double p = 0.1 * i, q = 0.1 * j;
      const bool r1 = p <= std::min(2.0, q) || (2 < p && p < q);
      const bool r2 = 2 < p && p == q;
      const bool r3 = p > std::max(2.0, q);
      const bool r4 = q < p && p <= 2;
      ASSERT_EQ(r1 + r2 + r3 + r4, 1) << p << " " << q;
      const RegimeLabel want = r1 ? RegimeLabel::Item1 : r2 ? RegimeLabel::Item2 : r3 ? RegimeLabel::Item3 : RegimeLabel::Item4;
      EXPECT_EQ(classifyRegime(p, q).label, want) << p << " " << q;
    }
  }
}

TEST(ClassifyRegime, GammaExponent) {
  const Regime r = classifyRegime(params(2.0, 4.0, 1.0, 2));
  ASSERT_TRUE(r.gammaExp.has_value());
  EXPECT_NEAR(*r.gammaExp, 2.0 / 4.0 + 1.0 - 4.0 / 2.0, 1e-15);
  EXPECT_FALSE(classifyRegime(params(3.0, 3.0)).gammaExp.has_value());
}

TEST(Triviality, Clauses) {
  EXPECT_FALSE(trivialityCheck(params(2.0, 4.0, 0.0)).trivial);
  EXPECT_TRUE(trivialityCheck(params(2.0, 4.0, 1.6)).trivial);
  EXPECT_FALSE(trivialityCheck(params(2.0, 2.0, 0.5)).trivial);
  EXPECT_TRUE(trivialityCheck(params(2.0, 2.0, 1.5)).trivial);
  EXPECT_TRUE(trivialityCheck(params(1.0, 1.0, 0.5)).trivial);
  EXPECT_NE(trivialityCheck(params(2.0, 4.0)).clause.find("p < q"), std::string::npos);
  EXPECT_NE(trivialityCheck(params(3.0, 2.0)).clause.find("q <= p"), std::string::npos);
}

TEST(Criterion, Item1IdentitySymbol) {
  // gamma = 1/2 and sup r (1 - r^2)^{1/2} = 1/2 at r^2 = 1/2.
  const CriterionReport r = criterionValue(Symbol::monomial(MultiIndex(1)), params(2.0, 2.0), cfg);
  EXPECT_EQ(r.regime.label, RegimeLabel::Item1);
  EXPECT_NEAR(r.criterion.value, 0.5, 1e-6);
  EXPECT_TRUE(r.criterion.converged);
}

TEST(Criterion, Item1LogSymbolDiverges) {
  const CriterionReport r = criterionValue(Symbol::logKernel(CVec::unit(1)), params(1.0, 2.0), cfg);
  EXPECT_FALSE(r.criterion.converged);
}

TEST(Criterion, Item2IdentitySymbol) {
  // The test kernel at a = 0 already gives int |z|^4 (1 - |z|^2)^2 dV = B(3, 3) = 1/30.
  const CriterionReport r = criterionValue(Symbol::monomial(MultiIndex(1)), params(4.0, 4.0), cfg);
  EXPECT_EQ(r.regime.label, RegimeLabel::Item2);
  const double atOrigin = std::pow(testutil::beta(3, 3), 0.25);
  EXPECT_GE(r.criterion.value, atOrigin * (1 - 1e-8));
  EXPECT_LE(r.criterion.value, atOrigin * 1.05);
}

TEST(Criterion, ConstantSymbolVanishesInEveryRegime) {
  for (auto [p, q] : {std::pair{1.0, 2.0}, std::pair{4.0, 4.0}, std::pair{4.0, 2.0}, std::pair{2.0, 1.0}}) {
    EXPECT_EQ(criterionValue(Symbol::constant(1, 3.0), params(p, q), cfg).criterion.value, 0.0) << p << " " << q;
  }
}

TEST(Criterion, Homogeneous) {
  const Symbol b = Symbol::polynomial({0.0, 1.0, 0.5});
  for (auto [p, q] : {std::pair{4.0, 2.0}, std::pair{2.0, 1.0}}) {
    const double c1 = criterionValue(b, params(p, q), cfg).criterion.value;
    const double c2 = criterionValue(b * cplx(0.0, -2.0), params(p, q), cfg).criterion.value;
    EXPECT_GT(c1, 0.0);
    EXPECT_NEAR(c2, 2.0 * c1, 1e-6 * c1) << p << " " << q;
  }
}

TEST(Criterion, TentExponents) {
  const TentExponents e = uExponents(params(4.0, 2.0));
  EXPECT_GT(e.outer, 0.0);
  EXPECT_THROW(uExponents(params(2.0, 4.0)), ParameterError);
  EXPECT_NEAR(vWeightExponent(params(2.0, 1.0, 0.5)), (2.0 - 1.0 - 0.5) / 2.0, 1e-15);
}

TEST(HardyBergman, CaseSelection) {
  const Symbol z = Symbol::monomial(MultiIndex(1));
  EXPECT_EQ(hardyToBergmanCriterion(z, params(2.0, 2.0), cfg).kase, HardyBergmanCase::EqualExponents);
  EXPECT_EQ(hardyToBergmanCriterion(z, params(1.0, 2.0), cfg).kase, HardyBergmanCase::SmallerP);
  EXPECT_EQ(hardyToBergmanCriterion(z, params(2.0, 1.0), cfg).kase, HardyBergmanCase::LargerP);
}

TEST(HardyBergman, LogSymbolBloch) {
  // gamma = 1 + 2/2 - 1 = 1, and |z| (1 - |z|^2) / |1 - z| tends to 2 along the radius.
  const HardyBergmanReport r = hardyToBergmanCriterion(Symbol::logKernel(CVec::unit(1)), params(1.0, 2.0), cfg);
  ASSERT_TRUE(r.gammaExp.has_value());
  EXPECT_NEAR(*r.gammaExp, 1.0, 1e-15);
  EXPECT_NEAR(r.criterion.value, 2.0, 1e-4);
}

TEST(HardyBergman, DensityNonnegativeAndZeroForConstants) {
  const SpherePoint xi = SpherePoint::fromAngle(0.4);
  EXPECT_EQ(hardyBergmanDensity(Symbol::constant(1, 2.0), xi, params(2.0, 1.0), cfg), 0.0);
  EXPECT_GT(hardyBergmanDensity(Symbol::monomial(MultiIndex(1)), xi, params(2.0, 1.0), cfg), 0.0);
}

TEST(Discretization, SupSideMatchesAreaSideScalesWithCell) {
  // Lattice sums count points, each standing for a hyperbolic cell of area ~ r^2,
  // so the area ratio divided by r^2 should not depend on r.
  const Symbol b = Symbol::polynomial({0.0, 1.0, 0.5});
  std::vector<double> scaled;
  for (double r : {0.2, 0.3}) {
    const DiscretizationReport d = discretizationCheck(b, params(2.0, 1.0), r, cfg);
    EXPECT_TRUE(d.latticeValid);
    EXPECT_NEAR(d.sup.ratio, 1.0, 0.1) << "r=" << r;
    EXPECT_LE(d.area.discrete, d.area.discreteWide4);
    EXPECT_LE(d.area.discreteWide4, d.area.discreteWide8);
    scaled.push_back(d.area.ratio / (r * r));
  }
  EXPECT_NEAR(scaled[0] / scaled[1], 1.0, 0.1);
  EXPECT_THROW(discretizationCheck(b, params(2.0, 1.0), 0.25, cfg), ParameterError);
}

TEST(Discretization, ConstantSymbolIsExactZero) {
  const DiscretizationReport d = discretizationCheck(Symbol::constant(1, 2.0), params(2.0, 1.0), 0.3, cfg);
  EXPECT_TRUE(d.area.exactZero);
  EXPECT_TRUE(d.sup.exactZero);
  EXPECT_EQ(d.area.ratio, 0.0);
}

TEST(Comparability, TableAndCsv) {
  const std::vector<Symbol> family{Symbol::monomial(MultiIndex(1)), Symbol::constant(1, 1.0)};
  const ExperimentTable t = comparabilityExperiment(family, params(2.0, 2.0), {Monomials{4}}, cfg);
  ASSERT_EQ(t.rows.size(), 2u);
  ASSERT_TRUE(t.rows[0].ratio.has_value());
  // Item1 criterion 1/2, monomial bound 1.
  EXPECT_NEAR(*t.rows[0].ratio, 2.0, 1e-5);
  EXPECT_FALSE(t.rows[1].ratio.has_value());
  EXPECT_EQ(toCsv(t).rfind("symbol,regime,criterion,opnorm_lower,ratio,converged\n", 0), 0u);
  EXPECT_THROW(comparabilityExperiment(family, params(1.0, 1.0, 0.5), {Monomials{4}}, cfg), ParameterError);
  EXPECT_NO_THROW(comparabilityExperiment(family, params(1.0, 1.0, 0.5), {Monomials{2}}, cfg, true));
}
