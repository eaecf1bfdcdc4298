#include "volterra/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "volterra/gauss_kronrod.hpp"
#include "volterra/parallel.hpp"

namespace volterra {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void requirePositive(double v, const char* name) {
  if (!(v > 0.0)) throw ParameterError(std::string(name) + " must be positive");
}

// Sphere nodes for outer integrals: the config's own grid for n = 1, a
// 64-direction product grid for n = 2.
NodeSet outerSphere(const QuadratureConfig& cfg) {
  if (cfg.dimension == 1) return sphereNodes(cfg);
  QuadratureConfig c = cfg;
  c.angularNodes = 64;
  return sphereNodes(c);
}

// Parallel evaluation of a per-direction quantity followed by an ordered weighted sum.
template <class F>
double outerIntegral(const NodeSet& sphere, F&& perDirection) {
  std::vector<double> vals(sphere.size());
  parallelFor(sphere.size(), [&](std::size_t i) { vals[i] = perDirection(SpherePoint(sphere.points[i])); });
  double s = 0.0;
  for (std::size_t i = 0; i < sphere.size(); ++i) s += sphere.weights[i] * vals[i];
  return s;
}

void requireVanishesAtOrigin(const Symbol& f) {
  const double v = std::abs(f(CVec::zero(f.dim())));
  if (v > 1e-12) {
    std::ostringstream os;
    os << "functional requires f(0) = 0, got |f(0)| = " << v;
    throw ParameterError(os.str());
  }
}

}  // namespace

void SpaceParams::validate() const {
  if (n < 1 || n > kMaxDimension) throw ParameterError("dimension n must be 1 or 2");
  if (!(p > 0.0)) throw ParameterError("p must be positive");
  if (!(q > 0.0)) throw ParameterError("q must be positive");
  if (!(alpha > -1.0)) throw ParameterError("alpha must exceed -1");
}

ResolutionTag tagOf(const QuadratureConfig& cfg, std::string method) {
  return {cfg.radialNodes, cfg.angularNodes, cfg.maxRadius, cfg.dimension, std::move(method)};
}

std::vector<double> integralMeans(const Evaluable& f, double p, const std::vector<double>& radii, int n) {
  requirePositive(p, "p");
  std::vector<double> means;
  for (double r : radii) {
    double integral;
    if (n == 1) {
      auto g = [&](double t) { return std::pow(std::abs(f.value(CVec(std::polar(r, t)))), p); };
      if (f.peak) {
        // Panels shrink geometrically toward the peak angle so narrow peaks are resolved.
        const double c = std::arg((*f.peak)[0]);
        std::vector<double> cuts{c - kPi, c + kPi};
        for (double w = kPi / 4.0; w > 1e-7; w /= 4.0) {
          cuts.push_back(c - w);
          cuts.push_back(c + w);
        }
        cuts.push_back(c);
        std::sort(cuts.begin(), cuts.end());
        integral = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
          integral += integrateAdaptive(g, cuts[k], cuts[k + 1], 1e-300, 1e-11, 4000, 2).value;
        }
        integral /= kTwoPi;
      } else {
        integral = integrateAdaptive(g, 0.0, kTwoPi, 1e-300, 1e-11, 20000, 16).value / kTwoPi;
      }
    } else {
      integral = sphereIntegrateAdaptive([&](const CVec& xi) { return std::pow(std::abs(f.value(xi * cplx(r))), p); },
                                         2, 1e-7, 1e-300, 3'000'000)
                     .value;
    }
    if (!std::isfinite(integral)) throw NonFiniteError("non-finite integral mean");
    means.push_back(std::pow(integral, 1.0 / p));
  }
  return means;
}

NormResult hardyNorm(const Evaluable& f, double p, const QuadratureConfig& cfg) {
  requirePositive(p, "p");
  cfg.validate();
  if (f.dim != cfg.dimension) throw DomainError("function and config dimensions differ");
  std::vector<double> radii;
  for (double r : {0.9, 0.99, 0.999, cfg.maxRadius}) {
    if (r <= cfg.maxRadius) radii.push_back(r);
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  if (f.boundaryRegular) radii.push_back(1.0 - 1e-12);
  NormResult out;
  out.resolution = tagOf(cfg, "integral means over radius ladder");
  out.trace = integralMeans(f, p, radii, f.dim);
  out.value = *std::max_element(out.trace.begin(), out.trace.end());
  if (!f.boundaryRegular && out.trace.size() >= 2) {
    const double a = out.trace[out.trace.size() - 2];
    const double b = out.trace.back();
    out.converged = !(a > 0.0 && b / a > 1.05);
  }
  return out;
}

NormResult hardyNorm(const Symbol& f, double p, const QuadratureConfig& cfg) {
  return hardyNorm(asEvaluable(f), p, cfg);
}

NormResult bergmanNorm(const Evaluable& f, double p, double alpha, const QuadratureConfig& cfg) {
  requirePositive(p, "p");
  if (!(alpha > -1.0)) throw DomainError("alpha must exceed -1");
  cfg.validate();
  if (f.dim != cfg.dimension) throw DomainError("function and config dimensions differ");
  const int n = cfg.dimension;
  const bool peaked = f.peak && f.peak->norm() >= 0.9;
  auto evaluate = [&](const QuadratureConfig& c) {
    if (peaked) {
      const double cw = bergmanWeightConstant(n, alpha);
      const NodeSet nodes = regionNodes(wholeBallRegion(SpherePoint::normalized(*f.peak)), c);
      return integrateNodesDefect(nodes, [&](const CVec& z, double d) {
        return cw * std::pow(d, alpha) * std::pow(std::abs(f.value(z)), p);
      });
    }
    const NodeSet nodes = ballNodes(alpha, c);
    std::vector<double> vals(nodes.size());
    parallelFor(nodes.size(), [&](std::size_t i) { vals[i] = std::pow(std::abs(f.value(nodes.points[i])), p); });
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!std::isfinite(vals[i])) detail::throwNonFinite(nodes.points[i], i);
      s += nodes.weights[i] * vals[i];
    }
    return s;
  };
  QuadratureConfig fine = cfg;
  fine.radialNodes *= 2;
  if (n == 1) fine.angularNodes *= 2;
  const double coarse = evaluate(cfg);
  const double refined = evaluate(fine);
  NormResult out;
  out.resolution = tagOf(cfg, peaked ? "boundary-centred region quadrature" : "Gauss-Jacobi product quadrature");
  out.trace = {std::pow(coarse, 1.0 / p), std::pow(refined, 1.0 / p)};
  out.value = out.trace[1];
  out.converged = std::abs(out.trace[1] - out.trace[0]) <= 1e-6 * std::max(out.trace[1], 1e-300) ||
                  out.trace[1] == out.trace[0];
  return out;
}

NormResult bergmanNorm(const Symbol& f, double p, double alpha, const QuadratureConfig& cfg) {
  return bergmanNorm(asEvaluable(f), p, alpha, cfg);
}

NormResult blochSeminorm(const Evaluable& rb, double gammaExp, const QuadratureConfig& cfg) {
  cfg.validate();
  NormResult out;
  out.resolution = tagOf(cfg, "grid supremum over cutoff ladder");
  const auto radii = cutoffLadder(cfg.maxRadius);
  auto g = [&](const CVec& z) {
    const double v = std::abs(rb.value(z));
    return v == 0.0 ? 0.0 : v * std::pow((1.0 - z.norm()) * (1.0 + z.norm()), gammaExp);
  };
  std::vector<double> vals;
  bool stable = true;
  for (double r : radii) {
    const SupResult s = gridSup(g, cfg.withMaxRadius(r));
    vals.push_back(s.value);
    stable = stable && s.stable;
  }
  const BoundaryLimit lim = boundaryLimit(radii, vals);
  out.trace = lim.trace;
  out.value = lim.value;
  out.converged = lim.converged && stable;
  return out;
}

NormResult blochSeminorm(const Symbol& b, double gammaExp, const QuadratureConfig& cfg) {
  if (b.dim() != cfg.dimension) throw DomainError("symbol and config dimensions differ");
  return blochSeminorm(radialDerivative(b), gammaExp, cfg);
}

NormResult hardySteinFunctional(const Symbol& f, double p, const QuadratureConfig& cfg) {
  requirePositive(p, "p");
  cfg.validate();
  requireVanishesAtOrigin(f);
  const int n = cfg.dimension;
  const NodeSet nodes = ballNodes(1.0, cfg);
  NormResult out;
  out.resolution = tagOf(cfg, "Gauss-Jacobi (alpha = 1) product quadrature");
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const CVec& z = nodes.points[i];
    const double fz = std::abs(f(z));
    const double rf = std::abs(f.radial(z));
    double v;
    if (p == 2.0) {
      v = rf * rf;
    } else if (fz < 1e-12) {
      if (p < 2.0) {
        ++out.excludedNodes;
        continue;
      }
      v = 0.0;
    } else {
      v = std::pow(fz, p - 2.0) * rf * rf;
    }
    if (!std::isfinite(v)) detail::throwNonFinite(z, i);
    s += nodes.weights[i] * v;
  }
  out.value = s / bergmanWeightConstant(n, 1.0);
  return out;
}

NormResult areaFunctional(const Symbol& f, double p, const SpaceParams& params, const QuadratureConfig& cfg) {
  requirePositive(p, "p");
  cfg.validate();
  requireVanishesAtOrigin(f);
  const int n = cfg.dimension;
  NormResult out;
  out.resolution = tagOf(cfg, "Koranyi region quadrature");
  const NodeSet sphere = outerSphere(cfg);
  RealFn g = [&](const CVec& z) { return std::norm(f.radial(z)); };
  out.value = outerIntegral(sphere, [&](const SpherePoint& xi) {
    return std::pow(koranyiIntegrate(g, xi, params.aperture, 1.0 - n, cfg), 0.5 * p);
  });
  out.root = std::pow(out.value, 1.0 / p);
  return out;
}

NormResult tentFunctionNorm(const RealFn& g, double p, double q, double beta, const SpaceParams& params,
                            const QuadratureConfig& cfg) {
  cfg.validate();
  requirePositive(p, "p");
  requirePositive(q, "q");
  if (std::isinf(p) && std::isinf(q)) throw ParameterError("at most one tent exponent may be infinite");
  const int n = cfg.dimension;
  const NodeSet sphere = outerSphere(cfg);
  NormResult out;
  if (std::isinf(p)) {
    // sup over u != 0 of (1 - |u|^2)^{-n} int_{Q(u)} g^q (1 - |z|^2)^{n + beta} dV.
    out.resolution = tagOf(cfg, "Carleson-box supremum over Q(u)");
    std::vector<double> deltas;
    const double smallest = (1.0 - cfg.maxRadius) * (1.0 + cfg.maxRadius);
    for (double d = 1.0; d >= smallest * 0.999; d *= 0.7) deltas.push_back(d);
    std::vector<double> best(sphere.size(), 0.0);
    std::vector<std::size_t> bestIdx(sphere.size(), 0);
    parallelFor(sphere.size(), [&](std::size_t i) {
      const SpherePoint xi(sphere.points[i]);
      for (std::size_t k = 0; k < deltas.size(); ++k) {
        const NodeSet nodes = regionNodes(nonIsotropicBallRegion(xi, deltas[k]), cfg);
        const double mass = integrateNodesDefect(nodes, [&](const CVec& z, double d) {
          const double gv = g(z);
          return gv == 0.0 ? 0.0 : std::pow(gv, q) * std::pow(d, n + beta);
        });
        const double v = mass / std::pow(deltas[k], n);
        if (v > best[i]) {
          best[i] = v;
          bestIdx[i] = k;
        }
      }
    });
    std::size_t arg = 0;
    for (std::size_t i = 1; i < best.size(); ++i) {
      if (best[i] > best[arg]) arg = i;
    }
    out.value = std::pow(best[arg], 1.0 / q);
    out.converged = best[arg] == 0.0 || bestIdx[arg] + 1 < deltas.size();
    return out;
  }
  const auto radii = cutoffLadder(cfg.maxRadius);
  std::vector<double> vals;
  bool stable = true;
  for (double r : radii) {
    const QuadratureConfig c = cfg.withMaxRadius(r);
    double outer;
    if (std::isinf(q)) {
      outer = outerIntegral(sphere, [&](const SpherePoint& xi) {
        const SupResult s = regionSup(g, koranyiRegion(xi, params.aperture.value(), r), c);
        return std::pow(s.value, p);
      });
    } else {
      RealFn gq = [&](const CVec& z) {
        const double v = g(z);
        return v == 0.0 ? 0.0 : std::pow(v, q);
      };
      outer = outerIntegral(sphere, [&](const SpherePoint& xi) {
        return std::pow(koranyiIntegrate(gq, xi, params.aperture, beta, c), p / q);
      });
    }
    vals.push_back(std::pow(outer, 1.0 / p));
  }
  const BoundaryLimit lim = boundaryLimit(radii, vals);
  out.resolution = tagOf(cfg, std::isinf(q) ? "Koranyi region suprema over cutoff ladder"
                                            : "Koranyi region quadrature over cutoff ladder");
  out.trace = lim.trace;
  out.value = lim.value;
  out.converged = lim.converged && stable;
  return out;
}

double lueckingTilde(const MeasureSpec& mu, const SpherePoint& xi, const SpaceParams& params,
                     const QuadratureConfig& cfg) {
  cfg.validate();
  if (mu.isZero()) return 0.0;
  const int n = mu.dim();
  if (mu.isAtomic()) {
    const auto& a = mu.atomicPart();
    double s = 0.0;
    for (std::size_t k = 0; k < a.points.size(); ++k) {
      if (inKoranyi(a.points[k], xi.coords(), params.aperture.value())) {
        s += a.masses[k] * std::pow(1.0 - a.points[k].normSq(), -n);
      }
    }
    return s;
  }
  return koranyiIntegrate(mu.densityPart().w, xi, params.aperture, -static_cast<double>(n), cfg);
}

double poissonTransform(const RealFn& phi, const BallPoint& z, const QuadratureConfig& cfg) {
  cfg.validate();
  const int n = z.dim();
  const CVec zc = z.coords();
  const double d = std::pow(1.0 - zc.normSq(), n);
  auto kernel = [&](const CVec& xi) { return d / std::pow(std::norm(1.0 - inner(zc, xi)), n) * phi(xi); };
  const auto r = sphereIntegrateAdaptive(kernel, n, 1e-12, 1e-300, n == 1 ? 400000 : 3'000'000);
  return r.value;
}

double ntMaximal(const RealFn& f, const SpherePoint& xi, const SpaceParams& params, const QuadratureConfig& cfg) {
  cfg.validate();
  return regionSup(f, koranyiRegion(xi, params.aperture.value(), cfg.maxRadius), cfg).value;
}

double hlMaximal(const RealFn& phi, const SpherePoint& xi, const QuadratureConfig& cfg) {
  cfg.validate();
  const int n = xi.dim();
  double best = 0.0;
  if (n == 1) {
    const double c = std::arg(xi.coords()[0]);
    auto absPhi = [&](double t) { return std::abs(phi(CVec(std::polar(1.0, t)))); };
    const double full = integrateAdaptive(absPhi, c - kPi, c + kPi, 1e-300, 1e-10, 4000, 16).value / kTwoPi;
    best = full;
    // |1 - e^{it}| < delta^2 <=> |t| < 2 asin(delta^2 / 2).
    for (double d2 = 2.0; d2 >= 1e-4; d2 *= 0.8) {
      const double h = 2.0 * std::asin(std::min(1.0, 0.5 * d2));
      if (h >= kPi) continue;
      const double avg = integrateAdaptive(absPhi, c - h, c + h, 1e-300, 1e-10, 4000, 2).value / (2.0 * h);
      best = std::max(best, avg);
    }
    return best;
  }
  const NodeSet nodes = sphereNodes(QuadratureConfig{cfg.radialNodes, std::max(cfg.angularNodes, 128), cfg.maxRadius, 2});
  std::vector<double> vals(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = std::abs(phi(nodes.points[i]));
  for (double d2 = 2.5; d2 >= 1e-3; d2 *= 0.8) {
    double mass = 0.0, integral = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (std::abs(1.0 - inner(nodes.points[i], xi.coords())) < d2) {
        mass += nodes.weights[i];
        integral += nodes.weights[i] * vals[i];
        ++count;
      }
    }
    if (count < 8) break;
    best = std::max(best, integral / mass);
  }
  return best;
}

}  // namespace volterra
