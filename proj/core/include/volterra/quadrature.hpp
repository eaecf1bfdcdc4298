#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "volterra/errors.hpp"
#include "volterra/geometry.hpp"

namespace volterra {

using RealFn = std::function<double(const CVec&)>;
using ComplexFn = std::function<cplx(const CVec&)>;

/// Resolution of every grid-based computation.
struct QuadratureConfig {
  int radialNodes = 32;
  int angularNodes = 128;
  /// Outer cutoff radius for boundary-improper quantities.
  double maxRadius = 0.999;
  int dimension = 1;

  /// Throws ParameterError unless radialNodes >= 16, angularNodes >= 64,
  /// 0.9 <= maxRadius < 1 and dimension in {1, 2}.
  void validate() const;
  /// Node-count and dimension checks only; maxRadius may be any value in (0, 1).
  /// Used internally when a cutoff ladder steps below 0.9.
  void validateNodes() const;
  /// Same configuration with radial and angular node counts doubled.
  QuadratureConfig refined() const;
  QuadratureConfig withMaxRadius(double r) const;
};

/// Nodes and weights of a one-dimensional rule on [-1, 1].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Rule1D gaussLegendre(int count);
/// Gauss–Jacobi rule for the weight (1 - x)^a (1 + x)^b, a, b > -1.
Rule1D gaussJacobi(int count, double a, double b);

/// Weighted point set; weights integrate against a normalized measure.
struct NodeSet {
  std::vector<CVec> points;
  std::vector<double> weights;
  /// 1 - |z|^2 at each node, computed without cancellation where possible.
  std::vector<double> defect;
  std::size_t size() const noexcept { return points.size(); }
};

/// c(n, alpha) with dV_alpha = c (1 - |z|^2)^alpha dV and V_alpha(B) = 1.
double bergmanWeightConstant(int n, double alpha);

/// Trapezoidal circle (n = 1) or product S^3 grid (n = 2); weights sum to 1.
NodeSet sphereNodes(const QuadratureConfig& cfg);
/// Gauss–Jacobi in |z| tensorized with sphereNodes; weights sum to 1 for dV_alpha.
NodeSet ballNodes(double alpha, const QuadratureConfig& cfg);

namespace detail {

inline bool finiteValue(double v) { return std::isfinite(v); }
inline bool finiteValue(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

[[noreturn]] void throwNonFinite(const CVec& node, std::size_t index);

}  // namespace detail

/// Sum of w_i g(x_i) in node order. Throws NonFiniteError naming the first
/// offending node.
template <class F>
auto integrateNodes(const NodeSet& nodes, F&& g) -> std::decay_t<decltype(g(nodes.points[0]))> {
  using T = std::decay_t<decltype(g(nodes.points[0]))>;
  T sum{};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const T v = g(nodes.points[i]);
    if (!detail::finiteValue(v)) detail::throwNonFinite(nodes.points[i], i);
    sum += v * nodes.weights[i];
  }
  return sum;
}

/// Like integrateNodes for integrands g(z, 1 - |z|^2) that need the stable defect.
template <class F>
auto integrateNodesDefect(const NodeSet& nodes, F&& g)
    -> std::decay_t<decltype(g(nodes.points[0], 0.0))> {
  using T = std::decay_t<decltype(g(nodes.points[0], 0.0))>;
  T sum{};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const T v = g(nodes.points[i], nodes.defect[i]);
    if (!detail::finiteValue(v)) detail::throwNonFinite(nodes.points[i], i);
    sum += v * nodes.weights[i];
  }
  return sum;
}

/// Integral of g against the normalized surface measure; exact for constants.
template <class F>
auto sphereIntegrate(F&& g, const QuadratureConfig& cfg) {
  return integrateNodes(sphereNodes(cfg), std::forward<F>(g));
}

/// Integral of g against dV_alpha; exact normalization for constants.
template <class F>
auto ballIntegrate(F&& g, double alpha, const QuadratureConfig& cfg) {
  if (!(alpha > -1.0)) throw DomainError("ballIntegrate requires alpha > -1");
  return integrateNodes(ballNodes(alpha, cfg), std::forward<F>(g));
}

struct AdaptiveSphereResult {
  double value = 0.0;
  double errorEstimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Sphere integral refined until the relative change drops below relTol:
/// adaptive Gauss–Kronrod over the circle for n = 1, node doubling of the
/// product grid for n = 2. Suited to integrands peaked near a boundary point.
AdaptiveSphereResult sphereIntegrateAdaptive(const RealFn& g, int n, double relTol,
                                             double absTol = 1e-300, int maxEvaluations = 4'000'000);

/// A region of the ball described in coordinates centred at a boundary
/// point: w = <z, center> = 1 - rho e^{i phi}. Covers Korányi regions,
/// non-isotropic balls and the whole ball, optionally truncated to |z| < cutoffRadius.
struct BoundaryRegion {
  CVec center = CVec::unit(1);
  /// 2 / gamma for a Korányi region, 0 otherwise.
  double apertureTerm = 0.0;
  /// Upper bound on |1 - <z, center>|.
  double maxRho = std::numeric_limits<double>::infinity();
  /// Points with |z| >= cutoffRadius are excluded; 1 disables the cutoff.
  double cutoffRadius = 1.0;
};

BoundaryRegion koranyiRegion(const SpherePoint& xi, double gamma, double cutoffRadius = 1.0);
BoundaryRegion nonIsotropicBallRegion(const SpherePoint& xi, double delta, double cutoffRadius = 1.0);
BoundaryRegion wholeBallRegion(const SpherePoint& center, double cutoffRadius = 1.0);

/// Exact parametrization of a BoundaryRegion.
class RegionChart {
 public:
  explicit RegionChart(const BoundaryRegion& region);

  int dim() const noexcept { return center_.dim(); }
  /// Half-width of the admissible phi interval; 0 for an empty region.
  double phiMax() const noexcept { return phiMax_; }
  /// Admissible (lo, hi) range of rho at angle phi; lo >= hi means empty.
  std::pair<double, double> rhoRange(double phi) const noexcept;
  /// Squared radius of the admissible disc of the transverse coordinate (n = 2).
  double transverseRadiusSq(double rho, double phi) const noexcept;
  /// Point with w = 1 - rho e^{i phi} and transverse coordinate v.
  CVec point(double rho, double phi, cplx v = 0.0) const;
  /// rho at which the cutoff and aperture constraints exchange roles (n = 2), or 0.
  double kinkRho() const noexcept;
  bool hasCutoff() const noexcept { return cutoffTerm_ > 0.0; }
  double cutoffRadius() const noexcept { return std::sqrt(1.0 - cutoffTerm_); }
  /// True when 1 - |z|^2 vanishes on the upper rho boundary (no cutoff, no aperture).
  bool boundaryTouching() const noexcept { return cutoffTerm_ == 0.0 && c_ == 0.0; }
  const SpherePoint& center() const noexcept { return center_; }

 private:
  SpherePoint center_;
  double c_;
  double maxRho_;
  double cutoffTerm_;
  double phiMax_ = 0.0;
};

/// Quadrature nodes for dV restricted to the region.
NodeSet regionNodes(const BoundaryRegion& region, const QuadratureConfig& cfg);

/// int_{Gamma_gamma(xi)} g(z) (1 - |z|^2)^weightExp dV(z), truncated at
/// cfg.maxRadius, by exact parametrization of the region.
double koranyiIntegrate(const RealFn& g, const SpherePoint& xi, const Aperture& gamma,
                        double weightExp, const QuadratureConfig& cfg);

/// Same integral by masking the global ball grid with inKoranyi. Kept as
/// an independent route; converges slowly near the boundary.
struct MaskedIntegral {
  double value = 0.0;
  int nodesInside = 0;
};
MaskedIntegral koranyiIntegrateMasked(const RealFn& g, const SpherePoint& xi, const Aperture& gamma,
                                      double weightExp, const QuadratureConfig& cfg);

struct FubiniRatio {
  double ratio = 0.0;
  double ballSide = 0.0;
  double tentSide = 0.0;
};

/// Ratio of int g dV_beta to int_S int_{Gamma(xi)} g (1-|z|^2)^{beta-n} dV dsigma.
/// Throws ParameterError when the tent side vanishes.
FubiniRatio fubiniTentCheck(const RealFn& g, double beta, const QuadratureConfig& cfg,
                            const Aperture& gamma = Aperture(2.0));

/// Supremum estimate with its location and convergence diagnostics.
struct SupResult {
  double value = 0.0;
  CVec argmax;
  bool converged = false;
  /// Maximizer sits on the cutoff |z| = maxRadius, so the true supremum may lie beyond.
  bool atCutoff = false;
  /// Last refinement moved the value by at most 0.1%.
  bool stable = true;
  std::vector<double> refinementTrace;
};

/// Maximum of g over a radial-angular grid of {|z| <= maxRadius} with local
/// refinement around the argmax. converged is false when the last refinement
/// moved the value by more than 0.1% or the maximizer is on the cutoff.
SupResult gridSup(const RealFn& g, const QuadratureConfig& cfg, int refineLevels = 6);

/// Supremum of g over a BoundaryRegion with local refinement.
SupResult regionSup(const RealFn& g, const BoundaryRegion& region, const QuadratureConfig& cfg,
                    int refineLevels = 5);

/// Cutoff radii 1 - 10 eps, 1 - 5 eps, 1 - eps with eps = 1 - maxRadius
/// (the inner radius is clamped at 0.5).
std::vector<double> cutoffLadder(double maxRadius);

/// Behaviour of a quantity evaluated along cutoffLadder.
struct BoundaryLimit {
  double value = 0.0;          ///< Extrapolated limit when converged, else the finest value.
  double finest = 0.0;         ///< Value at the largest cutoff.
  bool converged = false;
  std::vector<double> trace;   ///< Values at each cutoff.
};

/// Classifies the growth of values taken at the given cutoff radii and,
/// when the sequence saturates, extrapolates quadratically in 1 - r.
BoundaryLimit boundaryLimit(const std::vector<double>& radii, const std::vector<double>& values);

}  // namespace volterra
