#pragma once

#include <string>
#include <vector>

#include "volterra/geometry.hpp"
#include "volterra/quadrature.hpp"

namespace volterra {

enum class KernelLemma { IctBnSphere, IctBnBall, DiscreteL2, FRGeneral, GammaLemma };

std::string toString(KernelLemma lemma);
/// Accepts the names printed by toString ("IctBn-sphere", "discrete-l2", ...).
KernelLemma kernelLemmaFromString(const std::string& name);

/// Exponents of the estimate under test; each lemma reads the ones it needs.
///   IctBn-sphere: s.  IctBn-ball: t, s.  discrete-l2: t, s, latticeR.
///   FR-general: s, r, t.  Gamma-lemma: theta, s, aperture.
struct LemmaExponents {
  int n = 1;
  double s = 1.0;
  double t = 0.0;
  double r = 0.0;
  double theta = 0.0;
  double latticeR = 0.5;
  Aperture aperture{2.0};
};

struct SweepRow {
  /// |z| (or |a| for the Gamma lemma).
  double radius = 0.0;
  double lhs = 0.0;
  double majorant = 0.0;
  double ratio = 0.0;
};

struct SweepTable {
  KernelLemma lemma = KernelLemma::IctBnSphere;
  LemmaExponents exponents;
  std::vector<SweepRow> rows;
  double maxRatio = 0.0;
  /// Ratios strictly increase over the last five rows without the increments decaying.
  bool monotoneDivergence = false;
};

/// Throws ParameterError naming the first violated hypothesis.
void checkLemmaHypotheses(KernelLemma lemma, const LemmaExponents& e);

/// Default base-point radii 1 - 10^{-k/3}: k = 0..9 for the integral estimates,
/// 0..6 for the lattice sum, 1..9 for the Gamma lemma.
std::vector<double> sweepRadii(KernelLemma lemma);

/// Left side over majorant for base points approaching the sphere.
/// IctBn and FR-general accept n in {1, 2}; discrete-l2 and the Gamma lemma need n = 1.
SweepTable kernelEstimateSweep(KernelLemma lemma, const LemmaExponents& e, const QuadratureConfig& cfg);
SweepTable kernelEstimateSweep(KernelLemma lemma, const LemmaExponents& e, const QuadratureConfig& cfg,
                               const std::vector<double>& radii);

/// True when the last five values strictly increase, grow by more than 1%, and the
/// last increment is at least 0.75 times the first.
bool monotoneDivergence(const std::vector<double>& values);

}  // namespace volterra
