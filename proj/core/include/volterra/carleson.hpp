#pragma once

#include <string>
#include <vector>

#include "volterra/measure.hpp"
#include "volterra/norms.hpp"
#include "volterra/symbols.hpp"

namespace volterra {

/// 64 boundary directions: equispaced angles (n = 1) or a 4 x 4 x 4 product grid on S^3.
std::vector<SpherePoint> directionGrid(int n);

/// sup over the a-grid of int (1 - |a|^2)^t |1 - <a, z>|^{-(ns + t)} dmu(z).
struct KernelConstant {
  double value = 0.0;
  double t = 1.0;
  CVec argmax;
  /// Largest value on each boundary-approach level 1 - |a| in {1, 0.5, 0.1, 0.01, 0.001}.
  std::vector<double> levelSup;
  /// Level sups still increasing without slowing down near the boundary.
  bool divergent = false;
};

/// sup over (xi, delta) of mu(B_delta(xi)) / delta^{ns}.
struct BoxConstant {
  double value = 0.0;
  CVec argmaxXi;
  double argmaxDelta = 0.0;
  bool atSmallestDelta = false;
  /// At the smallest delta and still increasing as delta shrinks.
  bool growing = false;
  std::string warning;
};

struct CarlesonReport {
  double s = 1.0;
  double sConstantKernel = 0.0;
  double sConstantBox = 0.0;
  double t = 1.0;
  /// Kernel constant at the second exponent (t = 0.5), for the t-robustness check.
  double tSecondary = 0.5;
  double sConstantKernelSecondary = 0.0;
  KernelConstant kernel;
  BoxConstant box;
  bool converged = true;
};

KernelConstant carlesonKernelConstant(const MeasureSpec& mu, double s, double t, const QuadratureConfig& cfg);
BoxConstant carlesonBoxConstant(const MeasureSpec& mu, double s, const QuadratureConfig& cfg);
/// Both constants, kernel test at t = 1 and t = 0.5.
CarlesonReport carlesonReport(const MeasureSpec& mu, double s, const QuadratureConfig& cfg);

/// |Rb|^{2p/(p-2)} (1 - |z|^2)^{(p - 2 alpha)/(p - 2)} dV. Throws ParameterError unless p > 2.
MeasureSpec symbolCarlesonMeasure(const Symbol& b, double p, double alpha);

}  // namespace volterra
