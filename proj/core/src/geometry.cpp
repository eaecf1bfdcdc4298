#include "volterra/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace volterra {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void checkDim(int n) {
  if (n < 1 || n > kMaxDimension) {
    throw DomainError("dimension must be 1 or 2");
  }
}

}  // namespace

CVec CVec::zero(int n) {
  checkDim(n);
  return n == 1 ? CVec(0.0) : CVec(0.0, 0.0);
}

CVec CVec::unit(int n) {
  checkDim(n);
  return n == 1 ? CVec(1.0) : CVec(1.0, 0.0);
}

double CVec::norm() const noexcept { return std::sqrt(normSq()); }

CVec CVec::operator+(const CVec& o) const {
  CVec r = *this;
  r.c_[0] += o.c_[0];
  r.c_[1] += o.c_[1];
  return r;
}

CVec CVec::operator-(const CVec& o) const {
  CVec r = *this;
  r.c_[0] -= o.c_[0];
  r.c_[1] -= o.c_[1];
  return r;
}

CVec CVec::operator*(cplx s) const {
  CVec r = *this;
  r.c_[0] *= s;
  r.c_[1] *= s;
  return r;
}

BallPoint::BallPoint(const CVec& z) : z_(z) {
  checkDim(z.dim());
  if (!(z.normSq() < 1.0)) {
    std::ostringstream os;
    os << "point outside the open unit ball (|z| = " << z.norm() << ")";
    throw DomainError(os.str());
  }
}

SpherePoint::SpherePoint(const CVec& xi) : xi_(xi) {
  checkDim(xi.dim());
  if (std::abs(xi.norm() - 1.0) > 1e-12) {
    throw DomainError("sphere point must have unit norm");
  }
}

SpherePoint SpherePoint::normalized(const CVec& v) {
  const double r = v.norm();
  if (!(r > 0.0)) throw DomainError("cannot normalize the zero vector");
  return SpherePoint(v * cplx(1.0 / r));
}

SpherePoint SpherePoint::fromAngle(double theta) { return SpherePoint(CVec(std::polar(1.0, theta))); }

CVec SpherePoint::frame(cplx w, cplx v) const {
  if (xi_.dim() == 1) return CVec(w * xi_[0]);
  // xi_perp = (-conj(xi_2), conj(xi_1)) is orthogonal to xi with unit norm.
  return CVec(w * xi_[0] - v * std::conj(xi_[1]), w * xi_[1] + v * std::conj(xi_[0]));
}

Aperture::Aperture(double gamma) : gamma_(gamma) {
  if (!(gamma > 1.0)) throw ParameterError("aperture gamma must exceed 1");
}

CVec mobiusRaw(const CVec& a, const CVec& z) {
  const double aa = a.normSq();
  const cplx za = inner(z, a);
  const cplx denom = 1.0 - za;
  if (aa == 0.0) return -z;
  // phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z,a>), P_a z = <z,a> a / |a|^2.
  const double sa = std::sqrt(1.0 - aa);
  const CVec pz = a * (za / aa);
  const CVec qz = z - pz;
  return (a - pz - qz * cplx(sa)) * (1.0 / denom);
}

BallPoint mobius(const BallPoint& a, const BallPoint& z) {
  if (a.dim() != z.dim()) throw DomainError("dimension mismatch");
  const CVec w = mobiusRaw(a.coords(), z.coords());
  // Rounding can push |w| to 1 for points extremely close to the sphere.
  if (!(w.normSq() < 1.0)) return BallPoint(w * cplx((1.0 - 1e-16) / w.norm()));
  return BallPoint(w);
}

double pseudoHyperbolicComplement(const CVec& z, const CVec& w) {
  const double num = (1.0 - z.normSq()) * (1.0 - w.normSq());
  return num / std::norm(1.0 - inner(w, z));
}

double bergmanDistanceRaw(const CVec& z, const CVec& w) {
  const double comp = std::min(1.0, pseudoHyperbolicComplement(z, w));
  const double rho = std::sqrt(1.0 - comp);
  // atanh(rho) = 0.5 log((1+rho)^2 / (1 - rho^2)).
  if (rho < 1e-8) return rho;
  return 0.5 * std::log((1.0 + rho) * (1.0 + rho) / comp);
}

double bergmanDistance(const BallPoint& z, const BallPoint& w) {
  if (z.dim() != w.dim()) throw DomainError("dimension mismatch");
  return bergmanDistanceRaw(z.coords(), w.coords());
}

bool inKoranyi(const CVec& z, const CVec& xi, double gamma) noexcept {
  return std::abs(1.0 - inner(z, xi)) < 0.5 * gamma * (1.0 - z.normSq());
}

bool inNonIsotropicBall(const CVec& z, const CVec& xi, double delta) noexcept {
  return std::abs(1.0 - inner(z, xi)) < delta;
}

bool inNonIsotropicBall(const BallPoint& z, const SpherePoint& xi, double delta) {
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  return inNonIsotropicBall(z.coords(), xi.coords(), delta);
}

bool Arc::full() const noexcept { return halfWidth >= std::numbers::pi; }

double Arc::measure() const noexcept {
  if (empty()) return 0.0;
  if (full()) return 1.0;
  return halfWidth / std::numbers::pi;
}

bool Arc::contains(double theta) const noexcept {
  if (empty()) return false;
  if (full()) return true;
  const double d = std::remainder(theta - center, kTwoPi);
  return std::abs(d) < halfWidth;
}

Arc koranyiShadowArc(cplx z, double gamma) {
  const double r = std::abs(z);
  const double bound = 0.5 * gamma * (1.0 - r * r);
  Arc arc;
  arc.center = std::arg(z);
  if (r == 0.0) {
    arc.halfWidth = bound > 1.0 ? std::numbers::pi : 0.0;
    return arc;
  }
  // |1 - r e^{i(c - t)}|^2 = 1 - 2 r cos(t - c) + r^2 < bound^2.
  const double kappa = (1.0 + r * r - bound * bound) / (2.0 * r);
  if (kappa >= 1.0) {
    arc.halfWidth = 0.0;
  } else if (kappa < -1.0) {
    arc.halfWidth = std::numbers::pi;
  } else {
    arc.halfWidth = std::acos(kappa);
  }
  return arc;
}

ShadowEstimate boundarySetIz(const BallPoint& z, const Aperture& gamma, int resolution) {
  if (resolution < 8) throw ResolutionError("resolution must be at least 8");
  const CVec zc = z.coords();
  const double g = gamma.value();
  ShadowEstimate est;
  est.contains = [zc, g](const CVec& xi) { return inKoranyi(zc, xi, g); };
  if (z.dim() == 1) {
    for (int k = 0; k < resolution; ++k) {
      const CVec xi(std::polar(1.0, kTwoPi * k / resolution));
      if (inKoranyi(zc, xi, g)) ++est.samplesInside;
    }
    est.samplesTotal = resolution;
    est.measure = static_cast<double>(est.samplesInside) / resolution;
  } else {
    // sigma on S^3: |xi_1|^2 uniform on [0,1], both phases uniform.
    const int nt = std::max(8, resolution / 4);
    double mass = 0.0;
    for (int i = 0; i < nt; ++i) {
      const double t = (i + 0.5) / nt;
      for (int j = 0; j < resolution; ++j) {
        for (int k = 0; k < resolution; ++k) {
          const CVec xi(std::polar(std::sqrt(t), kTwoPi * j / resolution),
                        std::polar(std::sqrt(1.0 - t), kTwoPi * k / resolution));
          if (inKoranyi(zc, xi, g)) {
            ++est.samplesInside;
            mass += 1.0;
          }
        }
      }
    }
    est.samplesTotal = nt * resolution * resolution;
    est.measure = mass / est.samplesTotal;
  }
  if (est.samplesInside < 8) {
    std::ostringstream os;
    os << "grid of " << est.samplesTotal << " nodes resolves only " << est.samplesInside
       << " points of I(z); increase resolution";
    throw ResolutionError(os.str());
  }
  return est;
}

}  // namespace volterra
