#include "volterra/measure.hpp"

#include <cmath>

namespace volterra {

MeasureSpec MeasureSpec::zero(int n) {
  MeasureSpec m;
  m.n_ = n;
  m.zero_ = true;
  m.v_ = Atomic{};
  return m;
}

MeasureSpec MeasureSpec::density(int n, RealFn w, std::optional<CVec> peak) {
  if (n < 1 || n > kMaxDimension) throw DomainError("dimension must be 1 or 2");
  MeasureSpec m;
  m.n_ = n;
  m.v_ = Density{std::move(w), std::move(peak)};
  return m;
}

MeasureSpec MeasureSpec::atomic(const std::vector<BallPoint>& points, const std::vector<double>& masses) {
  if (points.size() != masses.size()) throw ParameterError("points and masses differ in length");
  MeasureSpec m;
  m.n_ = points.empty() ? 1 : points.front().dim();
  Atomic a;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!(masses[k] > 0.0)) throw ParameterError("atomic masses must be positive");
    if (points[k].dim() != m.n_) throw DomainError("atoms of mixed dimension");
    a.points.push_back(points[k].coords());
    a.masses.push_back(masses[k]);
  }
  m.zero_ = a.points.empty();
  m.v_ = std::move(a);
  return m;
}

MeasureSpec MeasureSpec::volume(int n) {
  return density(n, [](const CVec&) { return 1.0; });
}

MeasureSpec MeasureSpec::scaled(double c) const {
  if (!(c >= 0.0)) throw ParameterError("measures scale by nonnegative factors");
  if (c == 0.0) return zero(n_);
  MeasureSpec m = *this;
  if (auto* a = std::get_if<Atomic>(&m.v_)) {
    for (double& x : a->masses) x *= c;
  } else {
    auto& d = std::get<Density>(m.v_);
    RealFn w = d.w;
    d.w = [w, c](const CVec& z) { return c * w(z); };
  }
  return m;
}

bool regionContains(const BoundaryRegion& region, const CVec& z) noexcept {
  if (!(z.normSq() < 1.0)) return false;
  if (region.cutoffRadius < 1.0 && !(z.norm() < region.cutoffRadius)) return false;
  const double rho = std::abs(1.0 - inner(z, region.center));
  if (!(rho < region.maxRho)) return false;
  if (region.apertureTerm > 0.0 && !(region.apertureTerm * rho < 1.0 - z.normSq())) return false;
  return true;
}

double MeasureSpec::integrate(const RealFn& h, const BoundaryRegion& region, const QuadratureConfig& cfg) const {
  if (zero_) return 0.0;
  if (const auto* a = std::get_if<Atomic>(&v_)) {
    double s = 0.0;
    for (std::size_t k = 0; k < a->points.size(); ++k) {
      if (regionContains(region, a->points[k])) s += a->masses[k] * h(a->points[k]);
    }
    return s;
  }
  const auto& d = std::get<Density>(v_);
  const NodeSet nodes = regionNodes(region, cfg);
  return integrateNodes(nodes, [&](const CVec& z) {
    const double w = d.w(z);
    return w == 0.0 ? 0.0 : w * h(z);
  });
}

double MeasureSpec::ballMass(const SpherePoint& xi, double delta, const QuadratureConfig& cfg) const {
  return integrate([](const CVec&) { return 1.0; }, nonIsotropicBallRegion(xi, delta), cfg);
}

}  // namespace volterra
