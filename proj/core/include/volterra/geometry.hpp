#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>

#include "volterra/errors.hpp"

namespace volterra {

using cplx = std::complex<double>;

inline constexpr int kMaxDimension = 2;

/// A vector of C^n for n in {1, 2}. Raw coordinates, no domain constraint.
class CVec {
 public:
  CVec() = default;
  explicit CVec(cplx z1) : c_{z1, 0.0}, n_(1) {}
  CVec(cplx z1, cplx z2) : c_{z1, z2}, n_(2) {}

  static CVec zero(int n);
  /// e_1 in C^n.
  static CVec unit(int n);

  int dim() const noexcept { return n_; }
  cplx operator[](int k) const noexcept { return c_[static_cast<std::size_t>(k)]; }
  cplx& operator[](int k) noexcept { return c_[static_cast<std::size_t>(k)]; }

  double normSq() const noexcept {
    return n_ == 1 ? std::norm(c_[0]) : std::norm(c_[0]) + std::norm(c_[1]);
  }
  double norm() const noexcept;

  CVec operator+(const CVec& o) const;
  CVec operator-(const CVec& o) const;
  CVec operator*(cplx s) const;
  CVec operator-() const { return *this * cplx(-1.0); }

 private:
  std::array<cplx, kMaxDimension> c_{};
  int n_ = 1;
};

/// <z, w> = sum_k z_k conj(w_k).
inline cplx inner(const CVec& z, const CVec& w) noexcept {
  cplx s = z[0] * std::conj(w[0]);
  if (z.dim() == 2) s += z[1] * std::conj(w[1]);
  return s;
}

/// A point of the open unit ball of C^n.
class BallPoint {
 public:
  /// Throws DomainError unless |z| < 1 and n in {1, 2}.
  explicit BallPoint(const CVec& z);
  explicit BallPoint(cplx z) : BallPoint(CVec(z)) {}

  const CVec& coords() const noexcept { return z_; }
  int dim() const noexcept { return z_.dim(); }
  double norm() const noexcept { return z_.norm(); }

 private:
  CVec z_;
};

/// A point of the unit sphere, |xi| = 1 to within 1e-12.
class SpherePoint {
 public:
  explicit SpherePoint(const CVec& xi);
  /// Projects a nonzero vector onto the sphere.
  static SpherePoint normalized(const CVec& v);
  /// e^{i theta} in C^1.
  static SpherePoint fromAngle(double theta);

  const CVec& coords() const noexcept { return xi_; }
  int dim() const noexcept { return xi_.dim(); }

  /// Unitary frame sending e_1 to xi: returns w*xi + v*xi_perp.
  /// For n = 1 the v component is ignored.
  CVec frame(cplx w, cplx v = 0.0) const;

 private:
  CVec xi_;
};

/// Korányi aperture gamma > 1.
class Aperture {
 public:
  explicit Aperture(double gamma = 2.0);
  double value() const noexcept { return gamma_; }

 private:
  double gamma_;
};

/// Involutive ball automorphism phi_a with phi_a(0) = a, phi_a(a) = 0.
BallPoint mobius(const BallPoint& a, const BallPoint& z);
CVec mobiusRaw(const CVec& a, const CVec& z);

/// 1 - |phi_z(w)|^2 computed without cancellation.
double pseudoHyperbolicComplement(const CVec& z, const CVec& w);

/// Bergman metric beta(z, w) = atanh |phi_z(w)|.
double bergmanDistance(const BallPoint& z, const BallPoint& w);
double bergmanDistanceRaw(const CVec& z, const CVec& w);

/// |1 - <z, xi>| < (gamma/2)(1 - |z|^2).
bool inKoranyi(const CVec& z, const CVec& xi, double gamma) noexcept;
inline bool inKoranyi(const BallPoint& z, const SpherePoint& xi, const Aperture& gamma) noexcept {
  return inKoranyi(z.coords(), xi.coords(), gamma.value());
}

/// |1 - <z, xi>| < delta.
bool inNonIsotropicBall(const CVec& z, const CVec& xi, double delta) noexcept;
bool inNonIsotropicBall(const BallPoint& z, const SpherePoint& xi, double delta);

/// Arc of the unit circle, {e^{i t} : |t - center| < halfWidth (mod 2 pi)}.
/// halfWidth >= pi means the whole circle, halfWidth <= 0 the empty set.
struct Arc {
  double center = 0.0;
  double halfWidth = 0.0;
  bool empty() const noexcept { return halfWidth <= 0.0; }
  bool full() const noexcept;
  /// Normalized measure sigma(arc).
  double measure() const noexcept;
  bool contains(double theta) const noexcept;
};

/// n = 1 only: I(z) = {xi : z in Gamma_gamma(xi)} as an exact arc.
Arc koranyiShadowArc(cplx z, double gamma);

/// Result of the grid estimate of sigma(I(z)).
struct ShadowEstimate {
  double measure = 0.0;
  int samplesInside = 0;
  int samplesTotal = 0;
  /// Membership predicate xi -> inKoranyi(z, xi, gamma).
  std::function<bool(const CVec&)> contains;
};

/// Grid-count estimate of sigma(I(z)) with `resolution` nodes per angular
/// direction. Throws ResolutionError when fewer than 8 nodes land inside.
ShadowEstimate boundarySetIz(const BallPoint& z, const Aperture& gamma, int resolution);

}  // namespace volterra
