#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "volterra/measure.hpp"
#include "volterra/quadrature.hpp"
#include "volterra/symbols.hpp"

namespace volterra {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (n, p, q, alpha, gamma).
struct SpaceParams {
  int n = 1;
  double p = 2.0;
  double q = 2.0;
  double alpha = 0.0;
  Aperture aperture{2.0};

  /// Throws ParameterError unless n in {1, 2}, p, q > 0 and alpha > -1.
  void validate() const;
};

/// Quadrature metadata attached to every computed quantity.
struct ResolutionTag {
  int radialNodes = 0;
  int angularNodes = 0;
  double maxRadius = 0.0;
  int dimension = 1;
  std::string method;
};

ResolutionTag tagOf(const QuadratureConfig& cfg, std::string method);

struct NormResult {
  double value = 0.0;
  bool converged = true;
  ResolutionTag resolution;
  /// Values at successive refinement or cutoff levels.
  std::vector<double> trace;
  /// Nodes skipped because the integrand was singular there.
  int excludedNodes = 0;
  /// p-th root (or other companion value) where an operation reports one.
  std::optional<double> root;
};

/// sup_r M_p(f, r) over the ladder {0.9, 0.99, 0.999, maxRadius} (plus r -> 1 for
/// boundary-regular functions). converged is false when the last two means
/// differ by a factor above 1.05 for a function that is not boundary-regular.
NormResult hardyNorm(const Evaluable& f, double p, const QuadratureConfig& cfg);
NormResult hardyNorm(const Symbol& f, double p, const QuadratureConfig& cfg);
/// Integral means M_p(f, r) for the given radii.
std::vector<double> integralMeans(const Evaluable& f, double p, const std::vector<double>& radii, int n);

/// (int |f|^p dV_alpha)^{1/p}, refined until two resolutions agree.
NormResult bergmanNorm(const Evaluable& f, double p, double alpha, const QuadratureConfig& cfg);
NormResult bergmanNorm(const Symbol& f, double p, double alpha, const QuadratureConfig& cfg);

/// sup |Rb(z)| (1 - |z|^2)^gammaExp, with cutoff-ladder extrapolation.
NormResult blochSeminorm(const Symbol& b, double gammaExp, const QuadratureConfig& cfg);
/// Same for a precomputed radial derivative.
NormResult blochSeminorm(const Evaluable& rb, double gammaExp, const QuadratureConfig& cfg);

/// int |f|^{p-2} |Rf|^2 (1 - |z|^2) dV. Requires f(0) = 0.
NormResult hardySteinFunctional(const Symbol& f, double p, const QuadratureConfig& cfg);

/// int_S (int_{Gamma(xi)} |Rf|^2 (1 - |z|^2)^{1-n} dV)^{p/2} dsigma, root = p-th root.
NormResult areaFunctional(const Symbol& f, double p, const SpaceParams& params, const QuadratureConfig& cfg);

/// T^p_{q,beta} norm of a nonnegative function g with nu = (1 - |z|^2)^beta dV.
/// q = kInfinity gives T^p_infty, p = kInfinity gives T^infty_q. At most one may be infinite.
NormResult tentFunctionNorm(const RealFn& g, double p, double q, double beta, const SpaceParams& params,
                            const QuadratureConfig& cfg);

/// mu~(xi) = int_{Gamma(xi)} (1 - |z|^2)^{-n} dmu.
double lueckingTilde(const MeasureSpec& mu, const SpherePoint& xi, const SpaceParams& params,
                     const QuadratureConfig& cfg);

/// Invariant Poisson transform P[phi](z).
double poissonTransform(const RealFn& phi, const BallPoint& z, const QuadratureConfig& cfg);

/// N[f](xi) = sup over Gamma(xi), truncated at maxRadius, of f (pass |f|).
double ntMaximal(const RealFn& f, const SpherePoint& xi, const SpaceParams& params, const QuadratureConfig& cfg);
/// M[phi](xi) = sup_delta of averages of |phi| over I(xi, delta) = {|1 - <zeta, xi>| < delta^2}.
double hlMaximal(const RealFn& phi, const SpherePoint& xi, const QuadratureConfig& cfg);

}  // namespace volterra
