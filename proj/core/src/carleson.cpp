#include "volterra/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "volterra/parallel.hpp"

namespace volterra {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::array<double, 5> kLevels{0.0, 0.5, 0.9, 0.99, 0.999};

void requireS(double s) {
  if (!(s > 0.0)) throw ParameterError("s must be positive");
}

// Candidate kernel centres: the radial grid along every direction, plus atoms.
struct Candidate {
  CVec a;
  std::size_t level;  // index into kLevels, or kLevels.size() for atoms
};

}  // namespace

std::vector<SpherePoint> directionGrid(int n) {
  std::vector<SpherePoint> out;
  if (n == 1) {
    for (int k = 0; k < 64; ++k) out.push_back(SpherePoint::fromAngle(kTwoPi * k / 64.0));
    return out;
  }
  if (n != 2) throw DomainError("dimension must be 1 or 2");
  for (double t : {0.05, 0.35, 0.65, 0.95}) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        CVec xi = CVec::zero(2);
        xi[0] = std::polar(std::sqrt(t), kTwoPi * i / 4.0);
        xi[1] = std::polar(std::sqrt(1.0 - t), kTwoPi * (j + 0.5) / 4.0);
        out.push_back(SpherePoint::normalized(xi));
      }
    }
  }
  return out;
}

KernelConstant carlesonKernelConstant(const MeasureSpec& mu, double s, double t, const QuadratureConfig& cfg) {
  requireS(s);
  if (!(t > 0.0)) throw ParameterError("t must be positive");
  cfg.validateNodes();
  KernelConstant out;
  out.t = t;
  out.levelSup.assign(kLevels.size(), 0.0);
  const int n = mu.dim();
  out.argmax = CVec::zero(n);
  if (mu.isZero()) return out;
  const double e = n * s + t;
  const auto dirs = directionGrid(n);

  auto kernel = [&](const CVec& a, const CVec& z) {
    return std::pow(1.0 - a.normSq(), t) / std::pow(std::abs(1.0 - inner(a, z)), e);
  };

  std::vector<Candidate> cands;
  std::vector<double> vals;
  if (mu.isAtomic()) {
    const auto& at = mu.atomicPart();
    for (const auto& d : dirs) {
      for (std::size_t l = 0; l < kLevels.size(); ++l) cands.push_back({d.coords() * cplx(kLevels[l]), l});
    }
    // Along an atom's ray the supremum sits at 1 - rho comparable to 1 - |atom| but
    // not at the atom itself unless s = t, so the ray is sampled on a log grid.
    for (const auto& p : at.points) {
      cands.push_back({p, kLevels.size()});
      const double r = p.norm();
      if (r == 0.0) continue;
      for (int k = -16; k <= 16; ++k) {
        const double rho = 1.0 - (1.0 - r) * std::pow(10.0, k / 8.0);
        if (rho > 0.0 && rho < 1.0 - 1e-12) cands.push_back({p * cplx(rho / r), kLevels.size()});
      }
    }
    auto atomSum = [&](const CVec& a) {
      double sum = 0.0;
      for (std::size_t k = 0; k < at.points.size(); ++k) sum += at.masses[k] * kernel(a, at.points[k]);
      return sum;
    };
    vals.resize(cands.size());
    parallelFor(cands.size(), [&](std::size_t i) { vals[i] = atomSum(cands[i].a); });
    // Golden-section refinement in log(1 - rho) around the best ray candidate.
    std::size_t best = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (vals[i] > vals[best]) best = i;
    }
    const double rb = cands[best].a.norm();
    if (rb > 0.0) {
      const CVec dir = cands[best].a * cplx(1.0 / rb);
      auto along = [&](double u) { return atomSum(dir * cplx(1.0 - std::exp(u))); };
      const double step = std::log(10.0) / 8.0;
      double lo = std::log(1.0 - rb) - step, hi = std::min(std::log(1.0 - rb) + step, -1e-12);
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
        const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
        if (along(m1) < along(m2)) {
          lo = m1;
        } else {
          hi = m2;
        }
      }
      const CVec a = dir * cplx(1.0 - std::exp(0.5 * (lo + hi)));
      cands.push_back({a, kLevels.size()});
      vals.push_back(atomSum(a));
    }
  } else {
    // One boundary-graded node set per direction serves every level on that ray.
    const auto& w = mu.densityPart().w;
    vals.assign(dirs.size() * kLevels.size(), 0.0);
    for (const auto& d : dirs) {
      for (std::size_t l = 0; l < kLevels.size(); ++l) cands.push_back({d.coords() * cplx(kLevels[l]), l});
    }
    parallelFor(dirs.size(), [&](std::size_t i) {
      const NodeSet nodes = regionNodes(wholeBallRegion(dirs[i]), cfg);
      std::vector<double> dens(nodes.size());
      for (std::size_t j = 0; j < nodes.size(); ++j) dens[j] = w(nodes.points[j]);
      for (std::size_t l = 0; l < kLevels.size(); ++l) {
        const CVec a = dirs[i].coords() * cplx(kLevels[l]);
        double sum = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
          if (dens[j] != 0.0) sum += nodes.weights[j] * dens[j] * kernel(a, nodes.points[j]);
        }
        if (!std::isfinite(sum)) throw NonFiniteError("kernel integral is not finite");
        vals[i * kLevels.size() + l] = sum;
      }
    });
  }
  std::size_t arg = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (cands[i].level < kLevels.size()) {
      out.levelSup[cands[i].level] = std::max(out.levelSup[cands[i].level], vals[i]);
    }
    if (vals[i] > vals[arg]) arg = i;
  }
  out.value = vals[arg];
  out.argmax = cands[arg].a;
  const auto& L = out.levelSup;
  const double d1 = L[3] - L[2], d2 = L[4] - L[3];
  out.divergent = d1 > 0.0 && d2 > 0.0 && d2 >= 0.5 * d1 && L[4] > 1.01 * L[2];
  return out;
}

BoxConstant carlesonBoxConstant(const MeasureSpec& mu, double s, const QuadratureConfig& cfg) {
  requireS(s);
  cfg.validateNodes();
  BoxConstant out;
  const int n = mu.dim();
  out.argmaxXi = CVec::unit(n);
  if (mu.isZero()) return out;
  std::vector<double> deltas;
  for (double d = 2.0; d >= 1e-3 * (1.0 - 1e-12); d *= 0.8) deltas.push_back(d);
  const double smallest = deltas.back();
  auto dirs = directionGrid(n);
  const double e = n * s;

  struct Probe {
    std::size_t dir;
    double delta;
  };
  std::vector<Probe> probes;
  if (mu.isAtomic()) {
    const auto& at = mu.atomicPart();
    // Directions through the atoms; radii just above each atom's distance,
    // where the ratio jumps.
    for (const auto& p : at.points) {
      if (p.norm() > 0.0) dirs.push_back(SpherePoint::normalized(p));
    }
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      for (double d : deltas) probes.push_back({i, d});
      for (const auto& p : at.points) {
        const double rho = std::abs(1.0 - inner(p, dirs[i].coords()));
        if (rho >= smallest) probes.push_back({i, rho * (1.0 + 1e-9)});
      }
    }
  } else {
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      for (double d : deltas) probes.push_back({i, d});
    }
  }
  std::vector<double> vals(probes.size());
  parallelFor(probes.size(), [&](std::size_t i) {
    vals[i] = mu.ballMass(dirs[probes[i].dir], probes[i].delta, cfg) / std::pow(probes[i].delta, e);
  });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < vals.size(); ++i) {
    if (vals[i] > vals[arg]) arg = i;
  }
  out.value = vals[arg];
  out.argmaxXi = dirs[probes[arg].dir].coords();
  out.argmaxDelta = probes[arg].delta;
  out.atSmallestDelta = out.value > 0.0 && probes[arg].delta <= smallest * (1.0 + 1e-6);
  if (out.atSmallestDelta) {
    // Still growing if the small-delta end beats the value five grid steps up by 5%.
    const double coarser = smallest / std::pow(0.8, 5);
    double ref = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      if (std::abs(probes[i].delta - coarser) <= 1e-9 * coarser) ref = std::max(ref, vals[i]);
    }
    out.growing = out.value > 1.05 * ref;
    out.warning = "supremum attained at the smallest delta";
    if (out.growing) out.warning += "; ratio still growing, the box constant may be unbounded";
  }
  return out;
}

CarlesonReport carlesonReport(const MeasureSpec& mu, double s, const QuadratureConfig& cfg) {
  CarlesonReport r;
  r.s = s;
  r.kernel = carlesonKernelConstant(mu, s, r.t, cfg);
  r.sConstantKernel = r.kernel.value;
  r.sConstantKernelSecondary = carlesonKernelConstant(mu, s, r.tSecondary, cfg).value;
  r.box = carlesonBoxConstant(mu, s, cfg);
  r.sConstantBox = r.box.value;
  r.converged = !r.kernel.divergent && !r.box.growing;
  return r;
}

MeasureSpec symbolCarlesonMeasure(const Symbol& b, double p, double alpha) {
  if (!(p > 2.0)) throw ParameterError("the Carleson measure of a symbol needs p > 2");
  const int n = b.dim();
  if (b.isConstant()) return MeasureSpec::zero(n);
  const double e1 = 2.0 * p / (p - 2.0);
  const double e2 = (p - 2.0 * alpha) / (p - 2.0);
  return MeasureSpec::density(
      n,
      [b, e1, e2](const CVec& z) {
        // The weight vanishes on the sphere; nodes rounding onto it contribute nothing.
        if (!(z.normSq() < 1.0)) return 0.0;
        const double r = std::abs(b.radial(z));
        return r == 0.0 ? 0.0 : std::pow(r, e1) * std::pow(1.0 - z.normSq(), e2);
      },
      b.peak());
}

}  // namespace volterra
