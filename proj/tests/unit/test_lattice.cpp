#include <gtest/gtest.h>

#include "test_util.hpp"
#include "volterra/lattice.hpp"

using namespace volterra;

namespace {

const Lattice& halfLattice() {
  static const Lattice Z = buildLattice(0.5, 0.95, 1);
  return Z;
}

TentSequence unitAt(std::size_t k, std::size_t size) {
  TentSequence e(size, 0.0);
  e[k] = 1.0;
  return e;
}

}  // namespace

TEST(Lattice, CertificateHolds) {
  const Lattice& Z = halfLattice();
  EXPECT_TRUE(Z.certificate.valid());
  EXPECT_GE(Z.certificate.minPairwiseBergmanDist, 0.25);
  EXPECT_LE(Z.certificate.coveringRadius, 0.5);
  EXPECT_GT(Z.size(), 10u);
}

TEST(Lattice, IndependentCoveringCheck) {
  // Random points rather than the construction's test grid.
  const Lattice& Z = halfLattice();
  auto pts = testutil::randomDiscPoints(3000, Z.rmax, 21);
  const LatticeCertificate c = verifyLattice(Z, pts);
  EXPECT_TRUE(c.coveringVerified);
  for (const auto& z : pts) {
    double best = 1e300;
    for (const auto& a : Z.points) best = std::min(best, bergmanDistanceRaw(z, a.coords()));
    EXPECT_LE(best, Z.r + 1e-12);
  }
}

TEST(Lattice, RejectsBadParameters) {
  EXPECT_THROW(buildLattice(0.6, 0.95, 1), ParameterError);
  EXPECT_THROW(buildLattice(0.0, 0.95, 1), ParameterError);
  EXPECT_THROW(buildLattice(0.5, 0.8, 1), ParameterError);
  EXPECT_THROW(buildLattice(0.5, 1.0, 1), ParameterError);
  EXPECT_THROW(buildLattice(0.1, 0.9999, 1, 100), BudgetError);
}

TEST(Lattice, PrefixIsSeparatedButNotCovering) {
  const Lattice P = latticePrefix(halfLattice(), 20);
  EXPECT_EQ(P.size(), 20u);
  EXPECT_TRUE(P.certificate.separationVerified);
}

TEST(TentSequence, ZeroAndHomogeneity) {
  const Lattice& Z = halfLattice();
  const SpaceParams sp{};
  EXPECT_EQ(tentSeqNorm(TentSequence(Z.size(), 0.0), Z, 2.0, 2.0, sp), 0.0);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> N;
  TentSequence lam(Z.size());
  for (auto& x : lam) x = cplx(N(rng), N(rng));
  const double a = tentSeqNorm(lam, Z, 2.0, 1.0, sp);
  TentSequence scaled = lam;
  for (auto& x : scaled) x *= cplx(0.0, -3.0);
  EXPECT_NEAR(tentSeqNorm(scaled, Z, 2.0, 1.0, sp), 3.0 * a, 1e-12 * a);
  EXPECT_GT(a, 0.0);
}

TEST(TentSequence, TriangleInequality) {
  const Lattice& Z = halfLattice();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N;
  for (auto [p, q] : {std::pair{2.0, 1.0}, std::pair{1.5, 3.0}, std::pair{3.0, kInfinity}}) {
    TentSequence a(Z.size()), b(Z.size()), c(Z.size());
    for (std::size_t k = 0; k < Z.size(); ++k) {
      a[k] = N(rng);
      b[k] = N(rng);
      c[k] = a[k] + b[k];
    }
    const SpaceParams sp{};
    EXPECT_LE(tentSeqNorm(c, Z, p, q, sp), (tentSeqNorm(a, Z, p, q, sp) + tentSeqNorm(b, Z, p, q, sp)) * (1 + 1e-12));
  }
}

TEST(DualPairing, UnitVectors) {
  const Lattice& Z = halfLattice();
  for (std::size_t k : {std::size_t{0}, Z.size() / 2, Z.size() - 1}) {
    const TentSequence e = unitAt(k, Z.size());
    EXPECT_NEAR(std::abs(dualPairing(e, e, Z) - (1.0 - std::pow(Z.points[k].norm(), 2))), 0.0, 1e-15);
  }
  EXPECT_EQ(dualPairing(unitAt(0, Z.size()), unitAt(1, Z.size()), Z), cplx(0.0));
}

TEST(Factorization, UnitVectorIsExact) {
  const Lattice& Z = halfLattice();
  const Factorization f = factorizeTentSeq(unitAt(3, Z.size()), Z, 2.0, 1.0, 1.0, SpaceParams{});
  EXPECT_LT(f.maxReconstructionError, 1e-14);
  for (std::size_t k = 0; k < Z.size(); ++k) {
    if (k != 3) EXPECT_EQ(f.beta[k], cplx(0.0));
  }
  EXPECT_TRUE(std::isfinite(f.ratio));
}

TEST(Factorization, RandomSequenceReconstructsAndRatioBounded) {
  const Lattice& Z = halfLattice();
  std::mt19937_64 rng(6);
  std::normal_distribution<double> N;
  TentSequence lam(Z.size());
  for (auto& x : lam) x = cplx(N(rng), N(rng));
  for (auto [p, q, s] : {std::tuple{2.0, 1.0, 1.0}, std::tuple{3.0, 2.0, 1.5}, std::tuple{1.5, 4.0, 0.5}}) {
    const Factorization f = factorizeTentSeq(lam, Z, p, q, s, SpaceParams{});
    EXPECT_LT(f.maxReconstructionError, 1e-12);
    EXPECT_GT(f.ratio, 0.0);
    EXPECT_LT(f.ratio, 100.0) << p << " " << q << " " << s;
  }
}

TEST(Factorization, RejectsBadInput) {
  const Lattice& Z = halfLattice();
  const TentSequence e = unitAt(0, Z.size());
  EXPECT_THROW(factorizeTentSeq(e, Z, 2.0, 1.0, 2.0, SpaceParams{}), ParameterError);
  EXPECT_THROW(factorizeTentSeq(e, Z, 2.0, 1.0, 0.0, SpaceParams{}), ParameterError);
  EXPECT_THROW(factorizeTentSeq(TentSequence(Z.size(), 0.0), Z, 2.0, 1.0, 1.0, SpaceParams{}), ParameterError);
}

TEST(SequenceCarleson, ZeroAndLinearInMass) {
  const Lattice Z = latticePrefix(halfLattice(), 30);
  const QuadratureConfig cfg{};
  const SequenceCarleson zero = carlesonOfSequence(TentSequence(Z.size(), 0.0), Z, 2.0, SpaceParams{}, cfg);
  EXPECT_EQ(zero.report.sConstantKernel, 0.0);
  EXPECT_EQ(zero.report.sConstantBox, 0.0);
  TentSequence beta(Z.size(), 1.0);
  const double one = carlesonOfSequence(beta, Z, 2.0, SpaceParams{}, cfg).report.sConstantKernel;
  for (auto& x : beta) x *= 2.0;
  EXPECT_NEAR(carlesonOfSequence(beta, Z, 2.0, SpaceParams{}, cfg).report.sConstantKernel, 4.0 * one, 1e-10 * one);
}
