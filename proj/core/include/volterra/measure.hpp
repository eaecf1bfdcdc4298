#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "volterra/quadrature.hpp"

namespace volterra {

/// A positive measure on the ball: a density against dV or finitely many point masses.
class MeasureSpec {
 public:
  struct Density {
    RealFn w;
    /// Boundary point near which the density concentrates, if any.
    std::optional<CVec> peak;
  };
  struct Atomic {
    std::vector<CVec> points;
    std::vector<double> masses;
  };

  static MeasureSpec zero(int n);
  static MeasureSpec density(int n, RealFn w, std::optional<CVec> peak = std::nullopt);
  /// Throws ParameterError unless masses are positive and lengths agree.
  static MeasureSpec atomic(const std::vector<BallPoint>& points, const std::vector<double>& masses);
  /// Lebesgue measure dV.
  static MeasureSpec volume(int n);

  int dim() const noexcept { return n_; }
  bool isAtomic() const noexcept { return std::holds_alternative<Atomic>(v_); }
  bool isZero() const noexcept { return zero_; }
  const Density& densityPart() const { return std::get<Density>(v_); }
  const Atomic& atomicPart() const { return std::get<Atomic>(v_); }
  MeasureSpec scaled(double c) const;

  /// int h dmu over a region (density: region quadrature; atoms: membership sum).
  double integrate(const RealFn& h, const BoundaryRegion& region, const QuadratureConfig& cfg) const;
  /// mu(B_delta(xi)).
  double ballMass(const SpherePoint& xi, double delta, const QuadratureConfig& cfg) const;

 private:
  int n_ = 1;
  bool zero_ = false;
  std::variant<Density, Atomic> v_;
};

/// True when z lies in the region described by `region`.
bool regionContains(const BoundaryRegion& region, const CVec& z) noexcept;

}  // namespace volterra
