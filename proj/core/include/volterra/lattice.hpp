#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "volterra/carleson.hpp"
#include "volterra/norms.hpp"

namespace volterra {

struct LatticeCertificate {
  double minPairwiseBergmanDist = 0.0;
  /// Distinct points at least r/2 apart, so the D(a_k, r/4) are disjoint.
  bool separationVerified = false;
  /// Every test point lies within Bergman distance r of some lattice point.
  bool coveringVerified = false;
  /// Largest Bergman distance from a test point to the lattice.
  double coveringRadius = 0.0;
  /// Packing bound on how many D(a_k, 4r) can contain one point, from the
  /// disjointness of the D(a_k, r/4).
  int multiplicityBound = 0;
  /// Largest number of D(a_k, 4r) containing one test point.
  int observedMultiplicity = 0;
  std::size_t testPoints = 0;
  /// All three properties hold on the test set.
  bool valid() const noexcept {
    return separationVerified && coveringVerified && observedMultiplicity <= multiplicityBound;
  }
};

struct Lattice {
  std::vector<BallPoint> points;
  double r = 0.0;
  double rmax = 0.0;
  int n = 1;
  LatticeCertificate certificate;
  std::size_t size() const noexcept { return points.size(); }
};

/// Greedy r-lattice over hyperbolic shells, truncated at rmax, certified by
/// verifyLattice on a deterministic test grid. n = 1 only.
/// Throws ParameterError unless 0 < r <= 0.5 and 0.9 < rmax < 1, BudgetError
/// when more than maxPoints points would be needed.
Lattice buildLattice(double r, double rmax, int n = 1, std::size_t maxPoints = 200000);

/// The first `count` points (innermost shells first): a separated sequence, no
/// longer covering. The certificate is recomputed with rmax set to its outer radius.
Lattice latticePrefix(const Lattice& Z, std::size_t count);

/// Checks separation (D(a_k, r/4) disjoint), covering of the test points with
/// |z| <= rmax and the multiplicity bound, without using construction data.
LatticeCertificate verifyLattice(const Lattice& Z, const std::vector<CVec>& testPoints);
/// Deterministic polar test grid of the truncated disc.
std::vector<CVec> latticeTestGrid(const Lattice& Z);

using TentSequence = std::vector<cplx>;

/// T^p_q(Z), T^p_infty(Z) (q = kInfinity) or T^infty_q(Z) (p = kInfinity).
/// Evaluated exactly on the circle: A(xi) is constant between shadow-arc endpoints.
double tentSeqNorm(const TentSequence& lambda, const Lattice& Z, double p, double q, const SpaceParams& params);

/// sum_k lambda_k conj(mu_k) (1 - |a_k|^2)^n.
cplx dualPairing(const TentSequence& lambda, const TentSequence& mu, const Lattice& Z);

struct Factorization {
  TentSequence alpha;
  TentSequence beta;
  double lambdaNorm = 0.0;
  double alphaNorm = 0.0;
  double betaNorm = 0.0;
  /// alphaNorm * betaNorm / lambdaNorm.
  double ratio = 0.0;
  double maxReconstructionError = 0.0;
};

/// lambda = alpha * beta with alpha_k the s-average of A_lambda^{1/q} over the shadow
/// I(a_k) and beta_k = lambda_k / alpha_k (0 where lambda_k = 0).
/// Throws ParameterError unless 0 < s < p, q > 0 and lambda is nonzero;
/// NonFiniteError naming the index when alpha_k underflows.
Factorization factorizeTentSeq(const TentSequence& lambda, const Lattice& Z, double p, double q, double s,
                               const SpaceParams& params);

struct SequenceCarleson {
  CarlesonReport report;
  /// ||beta||_{T^infty_q(Z)} and its ratio to the kernel constant^{1/q}.
  double tentNorm = 0.0;
  double tentToCarlesonRatio = 0.0;
};

/// Carleson constants of sum_k |beta_k|^q (1 - |a_k|^2)^n delta_{a_k}, at s = 1.
SequenceCarleson carlesonOfSequence(const TentSequence& beta, const Lattice& Z, double q, const SpaceParams& params,
                                    const QuadratureConfig& cfg);

}  // namespace volterra
