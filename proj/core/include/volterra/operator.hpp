#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "volterra/lattice.hpp"
#include "volterra/norms.hpp"
#include "volterra/symbols.hpp"

namespace volterra {

/// J_b f(z) = int_0^1 f(tz) Rb(tz) dt / t by adaptive Gauss–Kronrod quadrature.
/// Throws ConvergenceError (with the achieved estimate) when tol is not met.
cplx applyJb(const Symbol& b, const Symbol& f, const CVec& z, double tol = 1e-12);

/// Closed form of J_b f when b and f are finite power series: the coefficient of
/// z^m is that of f Rb divided by |m|. nullopt otherwise.
std::optional<Symbol> jbExact(const Symbol& b, const Symbol& f);

/// J_b f as an evaluable function: the closed form when available, quadrature otherwise.
Evaluable jbEvaluable(const Symbol& b, const Symbol& f, double tol = 1e-12);

/// The 100-point interior grid used by radialIdentityResidual (10 radii x 10 angles,
/// embedded on the first coordinate axis and rotated into z_2 for n = 2).
std::vector<CVec> interiorGrid(int n);

/// max over interiorGrid of |R(J_b f)(z) - f(z) Rb(z)|, with R(J_b f) from a
/// Cauchy-integral radial derivative of the quadrature values of J_b f.
double radialIdentityResidual(const Symbol& b, const Symbol& f, const QuadratureConfig& cfg);

struct NecessityKernels {
  std::vector<double> radii{0.9, 0.99, 0.999};
  /// 0 selects (n + 1 + alpha)/p + 1.
  double s = 0.0;
  /// Directions per radius (n = 1 equispaced; the symbol's peak direction is always added).
  int directions = 8;
};
struct Monomials {
  int maxDegree = 8;
};
struct RandomPolynomials {
  int count = 10;
  int degree = 5;
  std::uint64_t seed = 1;
};
/// Atom sums over lattice points with deterministic seeded sign patterns.
struct Atoms {
  Lattice lattice;
  /// Number of lattice points used per probe.
  int sparsity = 8;
  int count = 4;
  std::uint64_t seed = 1;
};
using ProbeFamily = std::variant<NecessityKernels, Monomials, RandomPolynomials, Atoms>;

struct Probe {
  Symbol f;
  std::string label;
};

/// Expands a probe family into concrete test functions for the given symbol and space.
std::vector<Probe> expandProbes(const ProbeFamily& family, const Symbol& b, const SpaceParams& params);

struct ProbeRow {
  std::string label;
  double hardy = 0.0;
  double bergman = 0.0;
  double ratio = 0.0;
  bool converged = true;
};

struct OpNormBound {
  double value = 0.0;
  std::string bestProbe;
  std::vector<ProbeRow> rows;
  bool converged = true;
};

/// max over probes of ||J_b f||_{H^q} / ||f||_{A^p_alpha}.
/// Throws ParameterError for an empty probe set or a probe with vanishing Bergman norm.
OpNormBound opNormLowerBound(const Symbol& b, const SpaceParams& params, const std::vector<ProbeFamily>& probes,
                             const QuadratureConfig& cfg);
OpNormBound opNormLowerBound(const Symbol& b, const SpaceParams& params, const std::vector<Probe>& probes,
                             const QuadratureConfig& cfg);

/// Monomials up to degree 8 plus necessity kernels.
std::vector<ProbeFamily> defaultProbes();

}  // namespace volterra
