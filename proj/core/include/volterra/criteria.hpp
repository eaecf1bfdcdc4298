#pragma once

#include <optional>
#include <string>
#include <vector>

#include "volterra/lattice.hpp"
#include "volterra/norms.hpp"
#include "volterra/operator.hpp"
#include "volterra/symbols.hpp"

namespace volterra {

enum class RegimeLabel { Item1, Item2, Item3, Item4 };

std::string toString(RegimeLabel label);

struct Regime {
  RegimeLabel label = RegimeLabel::Item1;
  /// Bloch exponent n/q + 1 - (n+1+alpha)/p, set by the params overload for Item1.
  std::optional<double> gammaExp;
  /// Which inequality selected the label, including the boundary assignments.
  std::string boundaryRule;
};

/// Item1: p <= min(2, q) or 2 < p < q. Item2: 2 < p = q. Item3: p > max(2, q).
/// Item4: q < p <= 2. Throws ParameterError unless p, q > 0.
Regime classifyRegime(double p, double q);
Regime classifyRegime(const SpaceParams& params);

struct Triviality {
  bool trivial = false;
  /// "p < q" or "q <= p", with the inequality that was tested.
  std::string clause;
};

/// Only constant symbols give bounded J_b when
/// (p < q and alpha - p > n(p/q - 1) - 1) or (q <= p and alpha - p > -1).
Triviality trivialityCheck(const SpaceParams& params);

struct CriterionReport {
  Regime regime;
  NormResult criterion;
  /// Filled by attachOpNormLowerBound.
  std::optional<OpNormBound> opNormLower;
  Triviality triviality;
  SpaceParams params;
  ResolutionTag resolution;
};

/// Item1: Bloch seminorm with gammaExp. Item2: kernel Carleson constant (s = 1) of
/// the symbol measure, to the power (p-2)/(2p). Item3: L^{pq/(p-q)} norm of U_b.
/// Item4: L^{pq/(p-q)} norm of V_b.
CriterionReport criterionValue(const Symbol& b, const SpaceParams& params, const QuadratureConfig& cfg);

/// Adds the probe lower bound for ||J_b|| to an existing report.
void attachOpNormLowerBound(CriterionReport& report, const Symbol& b, const std::vector<ProbeFamily>& probes,
                            const QuadratureConfig& cfg);

/// Exponents of the U_b tent norm: g = |Rb|, T^{outer}_{inner, beta}.
struct TentExponents {
  double outer = 0.0;
  double inner = 0.0;
  double beta = 0.0;
};
/// Item3 exponents (requires p > max(2, q)).
TentExponents uExponents(const SpaceParams& params);
/// Weight exponent (p - 1 - alpha)/p of V_b.
double vWeightExponent(const SpaceParams& params);

enum class HardyBergmanCase { EqualExponents, SmallerP, LargerP };
std::string toString(HardyBergmanCase c);

struct HardyBergmanReport {
  HardyBergmanCase kase = HardyBergmanCase::EqualExponents;
  /// p = q: Carleson constant^{1/p}; p < q: Bloch seminorm; q < p: L^{p/(p-q)} norm of H_b.
  NormResult criterion;
  std::optional<double> gammaExp;
  SpaceParams params;
};

/// Criterion for J_b : H^p -> A^q_alpha.
HardyBergmanReport hardyToBergmanCriterion(const Symbol& b, const SpaceParams& params, const QuadratureConfig& cfg);
/// H_b(zeta) = int_{Gamma(zeta)} |Rb|^q (1 - |z|^2)^{q + alpha - n} dV, truncated at cfg.maxRadius.
double hardyBergmanDensity(const Symbol& b, const SpherePoint& zeta, const SpaceParams& params,
                           const QuadratureConfig& cfg);

struct DiscretizationSide {
  double continuous = 0.0;
  /// Lattice version at the same aperture, then at apertures 4 and 8.
  double discrete = 0.0;
  double discreteWide4 = 0.0;
  double discreteWide8 = 0.0;
  /// continuous / discrete; 0 when both vanish.
  double ratio = 0.0;
  bool exactZero = false;
};

struct DiscretizationReport {
  double r = 0.0;
  double rmax = 0.0;
  std::size_t latticeSize = 0;
  bool latticeValid = false;
  /// Area-type quantity: U_b exponents when p > max(2, q), else T^p_{q, alpha}.
  TentExponents areaExponents;
  DiscretizationSide area;
  /// Supremum-type quantity with weight (p - 1 - alpha)/p.
  double supOuter = 0.0;
  DiscretizationSide sup;
};

/// Continuous tent quantities of Rb (truncated at rmax) against their samples on
/// an r-lattice. n = 1 only. Throws ParameterError unless r in {0.1, 0.2, 0.3}.
DiscretizationReport discretizationCheck(const Symbol& b, const SpaceParams& params, double r,
                                         const QuadratureConfig& cfg, double rmax = 0.99);

struct ExperimentRow {
  std::string symbol;
  RegimeLabel regime = RegimeLabel::Item1;
  double criterion = 0.0;
  double opNormLower = 0.0;
  /// opNormLower / criterion, absent for a vanishing criterion.
  std::optional<double> ratio;
  bool converged = true;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;
  /// max / min of the recorded ratios.
  double ratioSpread = 0.0;
};

/// One row per symbol. Throws ParameterError when the parameters are trivial
/// unless allowTrivial is set.
ExperimentTable comparabilityExperiment(const std::vector<Symbol>& family, const SpaceParams& params,
                                        const std::vector<ProbeFamily>& probes, const QuadratureConfig& cfg,
                                        bool allowTrivial = false);

/// CSV with header symbol,regime,criterion,opnorm_lower,ratio,converged.
std::string toCsv(const ExperimentTable& table);

}  // namespace volterra
