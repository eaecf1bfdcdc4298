#include "volterra/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "volterra/gauss_kronrod.hpp"
#include "volterra/parallel.hpp"

namespace volterra {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void normalizeWeights(std::vector<double>& w) {
  double s = 0.0;
  for (double x : w) s += x;
  for (double& x : w) x /= s;
}

// Breakpoints on [a, b] graded geometrically (ratio 4) toward a, down to minWidth.
std::vector<double> gradedToward(double a, double b, double minWidth, bool towardLow) {
  std::vector<double> pts;
  const double len = b - a;
  int k = 0;
  while (len * std::pow(0.25, k) > minWidth && k < 40) ++k;
  pts.reserve(static_cast<std::size_t>(k) + 2);
  if (towardLow) {
    pts.push_back(a);
    for (int j = k; j >= 1; --j) pts.push_back(a + len * std::pow(0.25, j));
    pts.push_back(b);
  } else {
    pts.push_back(a);
    for (int j = 1; j <= k; ++j) pts.push_back(b - len * std::pow(0.25, j));
    // keep ascending order
    std::sort(pts.begin(), pts.end());
    pts.push_back(b);
  }
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

struct Panelled {
  std::vector<double> nodes;
  std::vector<double> weights;
};

void appendPanel(Panelled& out, const Rule1D& rule, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    out.nodes.push_back(c + h * rule.nodes[i]);
    out.weights.push_back(h * rule.weights[i]);
  }
}

Panelled panelRule(const std::vector<double>& breaks, const Rule1D& rule) {
  Panelled out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] > breaks[i]) appendPanel(out, rule, breaks[i], breaks[i + 1]);
  }
  return out;
}

}  // namespace

void QuadratureConfig::validate() const {
  std::ostringstream os;
  if (radialNodes < 16) os << "radialNodes must be >= 16; ";
  if (angularNodes < 64) os << "angularNodes must be >= 64; ";
  if (!(maxRadius >= 0.9 && maxRadius < 1.0)) os << "maxRadius must lie in [0.9, 1); ";
  if (dimension != 1 && dimension != 2) os << "dimension must be 1 or 2; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw ParameterError("invalid quadrature config: " + msg.substr(0, msg.size() - 2));
}

void QuadratureConfig::validateNodes() const {
  if (radialNodes < 16 || angularNodes < 64 || (dimension != 1 && dimension != 2) ||
      !(maxRadius > 0.0 && maxRadius < 1.0)) {
    throw ParameterError("invalid quadrature config");
  }
}

QuadratureConfig QuadratureConfig::refined() const {
  QuadratureConfig c = *this;
  c.radialNodes *= 2;
  c.angularNodes *= 2;
  return c;
}

QuadratureConfig QuadratureConfig::withMaxRadius(double r) const {
  QuadratureConfig c = *this;
  c.maxRadius = r;
  return c;
}

Rule1D gaussJacobi(int count, double a, double b) {
  if (count < 1) throw ParameterError("rule needs at least one node");
  if (!(a > -1.0 && b > -1.0)) throw DomainError("Jacobi exponents must exceed -1");
  // Golub–Welsch on the symmetric Jacobi matrix of the monic recurrence.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(count, count);
  const double ab = a + b;
  for (int k = 0; k < count; ++k) {
    const double d = 2.0 * k + ab;
    J(k, k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (d * (d + 2.0));
    if (k + 1 < count) {
      const double m = k + 1.0;
      const double e = 2.0 * m + ab;
      double off2;
      if (m == 1.0) {
        off2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
      } else {
        off2 = 4.0 * m * (m + a) * (m + b) * (m + ab) / (e * e * (e + 1.0) * (e - 1.0));
      }
      J(k, k + 1) = J(k + 1, k) = std::sqrt(off2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(ab + 2.0));
  Rule1D r;
  r.nodes.resize(static_cast<std::size_t>(count));
  r.weights.resize(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    r.nodes[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    r.weights[static_cast<std::size_t>(k)] = mu0 * v * v;
  }
  return r;
}

Rule1D gaussLegendre(int count) {
  if (count < 1) throw ParameterError("rule needs at least one node");
  Rule1D r;
  r.nodes.resize(static_cast<std::size_t>(count));
  r.weights.resize(static_cast<std::size_t>(count));
  const int n = count;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Final derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return r;
}

double bergmanWeightConstant(int n, double alpha) {
  if (!(alpha > -1.0)) throw DomainError("alpha must exceed -1");
  return std::exp(std::lgamma(n + alpha + 1.0) - std::lgamma(n + 1.0) - std::lgamma(alpha + 1.0));
}

namespace detail {

void throwNonFinite(const CVec& node, std::size_t index) {
  std::ostringstream os;
  os << "non-finite integrand value at node " << index << " (z = " << node[0];
  if (node.dim() == 2) os << ", " << node[1];
  os << ")";
  throw NonFiniteError(os.str());
}

}  // namespace detail

NodeSet sphereNodes(const QuadratureConfig& cfg) {
  cfg.validateNodes();
  NodeSet s;
  if (cfg.dimension == 1) {
    const int m = cfg.angularNodes;
    for (int k = 0; k < m; ++k) {
      s.points.emplace_back(std::polar(1.0, kTwoPi * k / m));
      s.weights.push_back(1.0 / m);
      s.defect.push_back(0.0);
    }
    return s;
  }
  // sigma on S^3: t = |xi_1|^2 uniform on [0, 1], phases uniform.
  const int mt = std::max(8, cfg.angularNodes / 8);
  const int ma = std::max(16, cfg.angularNodes / 4);
  const Rule1D gl = gaussLegendre(mt);
  for (int i = 0; i < mt; ++i) {
    const double t = 0.5 * (gl.nodes[static_cast<std::size_t>(i)] + 1.0);
    const double wt = 0.5 * gl.weights[static_cast<std::size_t>(i)];
    for (int j = 0; j < ma; ++j) {
      for (int k = 0; k < ma; ++k) {
        s.points.emplace_back(std::polar(std::sqrt(t), kTwoPi * j / ma),
                              std::polar(std::sqrt(1.0 - t), kTwoPi * k / ma));
        s.weights.push_back(wt / (static_cast<double>(ma) * ma));
        s.defect.push_back(0.0);
      }
    }
  }
  normalizeWeights(s.weights);
  return s;
}

NodeSet ballNodes(double alpha, const QuadratureConfig& cfg) {
  cfg.validateNodes();
  if (!(alpha > -1.0)) throw DomainError("ballIntegrate requires alpha > -1");
  const int n = cfg.dimension;
  // dV_alpha in r = |z| has density proportional to (1 - r)^alpha (1 + r)^alpha r^{2n-1}; the
  // smooth (1 + r)^alpha factor goes into the weights so odd powers of |z| are integrated exactly.
  const Rule1D gj = gaussJacobi(cfg.radialNodes, alpha, 2.0 * n - 1.0);
  const NodeSet sphere = sphereNodes(cfg);
  std::vector<double> radialW = gj.weights;
  for (std::size_t i = 0; i < gj.nodes.size(); ++i) radialW[i] *= std::pow(1.0 + 0.5 * (gj.nodes[i] + 1.0), alpha);
  normalizeWeights(radialW);
  NodeSet b;
  b.points.reserve(gj.nodes.size() * sphere.size());
  for (std::size_t i = 0; i < gj.nodes.size(); ++i) {
    const double r = 0.5 * (gj.nodes[i] + 1.0);
    const double defect = 0.5 * (1.0 - gj.nodes[i]) * (1.0 + r);
    for (std::size_t j = 0; j < sphere.size(); ++j) {
      b.points.push_back(sphere.points[j] * cplx(r));
      b.weights.push_back(radialW[i] * sphere.weights[j]);
      b.defect.push_back(defect);
    }
  }
  return b;
}

AdaptiveSphereResult sphereIntegrateAdaptive(const RealFn& g, int n, double relTol, double absTol,
                                             int maxEvaluations) {
  AdaptiveSphereResult out;
  if (n == 1) {
    auto f = [&](double t) {
      const double v = g(CVec(std::polar(1.0, t)));
      if (!std::isfinite(v)) detail::throwNonFinite(CVec(std::polar(1.0, t)), 0);
      return v;
    };
    const auto est = integrateAdaptive(f, 0.0, kTwoPi, absTol * kTwoPi, relTol,
                                       std::max(16, maxEvaluations / 30), 16);
    out.value = est.value / kTwoPi;
    out.errorEstimate = est.error / kTwoPi;
    out.evaluations = est.evaluations;
    out.converged = est.converged;
    return out;
  }
  if (n != 2) throw DomainError("dimension must be 1 or 2");
  QuadratureConfig cfg;
  cfg.dimension = 2;
  cfg.angularNodes = 64;
  double prev = sphereIntegrate(g, cfg);
  out.evaluations = static_cast<int>(sphereNodes(cfg).size());
  while (true) {
    cfg.angularNodes *= 2;
    const auto nodes = sphereNodes(cfg);
    if (out.evaluations + static_cast<int>(nodes.size()) > maxEvaluations) {
      out.value = prev;
      out.converged = false;
      return out;
    }
    const double cur = integrateNodes(nodes, g);
    out.evaluations += static_cast<int>(nodes.size());
    out.errorEstimate = std::abs(cur - prev);
    out.value = cur;
    if (out.errorEstimate <= std::max(absTol, relTol * std::abs(cur))) {
      out.converged = true;
      return out;
    }
    prev = cur;
  }
}

BoundaryRegion koranyiRegion(const SpherePoint& xi, double gamma, double cutoffRadius) {
  Aperture ap(gamma);
  BoundaryRegion r;
  r.center = xi.coords();
  r.apertureTerm = 2.0 / ap.value();
  r.cutoffRadius = cutoffRadius;
  return r;
}

BoundaryRegion nonIsotropicBallRegion(const SpherePoint& xi, double delta, double cutoffRadius) {
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  BoundaryRegion r;
  r.center = xi.coords();
  r.maxRho = delta;
  r.cutoffRadius = cutoffRadius;
  return r;
}

BoundaryRegion wholeBallRegion(const SpherePoint& center, double cutoffRadius) {
  BoundaryRegion r;
  r.center = center.coords();
  r.cutoffRadius = cutoffRadius;
  return r;
}

RegionChart::RegionChart(const BoundaryRegion& region)
    : center_(SpherePoint::normalized(region.center)),
      c_(region.apertureTerm),
      maxRho_(region.maxRho),
      cutoffTerm_(0.0) {
  if (!(region.cutoffRadius > 0.0 && region.cutoffRadius <= 1.0)) {
    throw ParameterError("cutoff radius must lie in (0, 1]");
  }
  cutoffTerm_ = (1.0 - region.cutoffRadius) * (1.0 + region.cutoffRadius);
  if (c_ < 0.0) throw ParameterError("aperture term must be nonnegative");
  const auto nonEmpty = [this](double phi) {
    const auto [lo, hi] = rhoRange(phi);
    return hi > lo;
  };
  if (!nonEmpty(0.0)) {
    phiMax_ = 0.0;
    return;
  }
  double a = 0.0, b = 0.5 * kPi;
  for (int it = 0; it < 80; ++it) {
    const double m = 0.5 * (a + b);
    (nonEmpty(m) ? a : b) = m;
  }
  phiMax_ = a;
}

std::pair<double, double> RegionChart::rhoRange(double phi) const noexcept {
  const double cp = std::cos(phi);
  if (!(cp > 0.0)) return {0.0, 0.0};
  double lo = 0.0, hi = 2.0 * cp;
  if (cutoffTerm_ > 0.0) {
    // rho (2 cos phi - rho) > e  <=>  rho_- < rho < rho_+.
    const double disc = cp * cp - cutoffTerm_;
    if (!(disc > 0.0)) return {0.0, 0.0};
    const double s = std::sqrt(disc);
    lo = cutoffTerm_ / (cp + s);
    hi = cp + s;
  }
  hi = std::min({hi, 2.0 * cp - c_, maxRho_});
  return {lo, hi};
}

double RegionChart::transverseRadiusSq(double rho, double phi) const noexcept {
  const double v = rho * (2.0 * std::cos(phi) - rho) - std::max(c_ * rho, cutoffTerm_);
  return std::max(0.0, v);
}

CVec RegionChart::point(double rho, double phi, cplx v) const {
  return center_.frame(1.0 - std::polar(rho, phi), v);
}

double RegionChart::kinkRho() const noexcept {
  return (c_ > 0.0 && cutoffTerm_ > 0.0) ? cutoffTerm_ / c_ : 0.0;
}

namespace {

// Near the sphere the chart coordinates can round a point onto |z| = 1. The
// defect is accurate there, so the point is pulled back to match it.
void pushRegionNode(NodeSet& out, CVec z, double weight, double defect) {
  if (!(defect > 0.0)) return;
  if (!(z.normSq() < 1.0)) z = z * cplx(std::sqrt(1.0 - defect) / z.norm());
  if (!(z.normSq() < 1.0)) return;
  out.points.push_back(z);
  out.weights.push_back(weight);
  out.defect.push_back(defect);
}

}  // namespace

NodeSet regionNodes(const BoundaryRegion& region, const QuadratureConfig& cfg) {
  cfg.validateNodes();
  const RegionChart chart(region);
  NodeSet out;
  const double Phi = chart.phiMax();
  if (!(Phi > 0.0)) return out;
  const int n = chart.dim();

  // phi = Phi sin(pi s / 2) removes the square-root behaviour of the rho range at +-Phi.
  const int phiPanels = 4;
  const int phiPer = n == 1 ? std::max(8, cfg.angularNodes / 16) : 6;
  const Rule1D phiRule = gaussLegendre(phiPer);
  std::vector<double> sBreaks;
  for (int k = 0; k <= phiPanels; ++k) sBreaks.push_back(-1.0 + 2.0 * k / phiPanels);
  if (chart.boundaryTouching()) {
    // Near phi = +-Phi the rho range shrinks to the scale of any interior peak;
    // grade toward both ends so that transition is resolved.
    const int levels = n == 1 ? 8 : 3;
    for (int k = 1; k <= levels; ++k) {
      const double g = 0.5 * std::pow(0.25, k);
      sBreaks.push_back(-1.0 + g);
      sBreaks.push_back(1.0 - g);
    }
    std::sort(sBreaks.begin(), sBreaks.end());
  }
  const Panelled sNodes = panelRule(sBreaks, phiRule);

  const int rhoPer = n == 1 ? std::max(6, cfg.radialNodes / 4) : 5;
  const Rule1D rhoRule = gaussLegendre(rhoPer);
  const Rule1D uRule = gaussLegendre(6);
  const int psiCount = 8;

  for (std::size_t is = 0; is < sNodes.nodes.size(); ++is) {
    const double s = sNodes.nodes[is];
    const double phi = Phi * std::sin(0.5 * kPi * s);
    const double wPhi = sNodes.weights[is] * Phi * 0.5 * kPi * std::cos(0.5 * kPi * s);
    const auto [lo, hi] = chart.rhoRange(phi);
    if (!(hi > lo)) continue;
    const double cp = std::cos(phi);
    const bool hiSingular = chart.boundaryTouching() && hi >= 2.0 * cp * (1.0 - 1e-15);
    std::vector<double> breaks;
    const double floorLo = lo > 0.0 ? 0.25 * lo : 1e-12 * hi;
    if (hiSingular && n == 1) {
      const double mid = 0.5 * (lo + hi);
      breaks = gradedToward(lo, mid, floorLo, true);
      auto upper = gradedToward(mid, hi, 1e-12 * hi, false);
      breaks.insert(breaks.end(), upper.begin() + 1, upper.end());
    } else {
      breaks = gradedToward(lo, hi, floorLo, true);
    }
    if (n == 2) {
      const double kink = chart.kinkRho();
      if (kink > lo && kink < hi) {
        breaks.push_back(kink);
        std::sort(breaks.begin(), breaks.end());
      }
    }
    const Panelled rho = panelRule(breaks, rhoRule);
    for (std::size_t ir = 0; ir < rho.nodes.size(); ++ir) {
      const double r = rho.nodes[ir];
      const double base = r * (2.0 * cp - r);  // 1 - |w|^2
      if (n == 1) {
        pushRegionNode(out, chart.point(r, phi), wPhi * rho.weights[ir] * r / kPi, base);
        continue;
      }
      const double h = chart.transverseRadiusSq(r, phi);
      if (!(h > 0.0)) continue;
      std::vector<double> uBreaks = chart.boundaryTouching() ? gradedToward(0.0, h, 1e-10 * h, false)
                                                             : std::vector<double>{0.0, h};
      const Panelled u = panelRule(uBreaks, uRule);
      for (std::size_t iu = 0; iu < u.nodes.size(); ++iu) {
        const double uu = u.nodes[iu];
        for (int k = 0; k < psiCount; ++k) {
          const double psi = kTwoPi * (k + 0.5 * (iu % 2)) / psiCount;
          // dV = (2 / pi^2) rho drho dphi (1/2) du dpsi.
          pushRegionNode(out, chart.point(r, phi, std::polar(std::sqrt(uu), psi)),
                         wPhi * rho.weights[ir] * r * u.weights[iu] * (kTwoPi / psiCount) / (kPi * kPi), base - uu);
        }
      }
    }
  }
  return out;
}

double koranyiIntegrate(const RealFn& g, const SpherePoint& xi, const Aperture& gamma, double weightExp,
                        const QuadratureConfig& cfg) {
  if (xi.dim() != cfg.dimension) throw DomainError("dimension mismatch between xi and config");
  const NodeSet nodes = regionNodes(koranyiRegion(xi, gamma.value(), cfg.maxRadius), cfg);
  if (nodes.size() == 0) return 0.0;
  return integrateNodesDefect(nodes, [&](const CVec& z, double d) {
    const double gv = g(z);
    return gv == 0.0 ? 0.0 : gv * std::pow(d, weightExp);
  });
}

MaskedIntegral koranyiIntegrateMasked(const RealFn& g, const SpherePoint& xi, const Aperture& gamma,
                                      double weightExp, const QuadratureConfig& cfg) {
  if (xi.dim() != cfg.dimension) throw DomainError("dimension mismatch between xi and config");
  // dV = dV_0; Gauss–Jacobi with alpha = 0 and the cutoff applied by masking as well.
  const NodeSet nodes = ballNodes(0.0, cfg);
  MaskedIntegral out;
  const double rmax2 = cfg.maxRadius * cfg.maxRadius;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const CVec& z = nodes.points[i];
    if (z.normSq() >= rmax2 || !inKoranyi(z, xi.coords(), gamma.value())) continue;
    ++out.nodesInside;
    const double v = g(z) * std::pow(nodes.defect[i], weightExp);
    if (!std::isfinite(v)) detail::throwNonFinite(z, i);
    out.value += v * nodes.weights[i];
  }
  return out;
}

FubiniRatio fubiniTentCheck(const RealFn& g, double beta, const QuadratureConfig& cfg, const Aperture& gamma) {
  cfg.validate();
  const int n = cfg.dimension;
  FubiniRatio out;
  // Unnormalized (1 - |z|^2)^beta dV.
  out.ballSide = ballIntegrate(g, beta, cfg) / bergmanWeightConstant(n, beta);
  const NodeSet sphere = sphereNodes(n == 1 ? cfg : QuadratureConfig{cfg.radialNodes, 64, cfg.maxRadius, 2});
  std::vector<double> inner(sphere.size());
  parallelFor(sphere.size(), [&](std::size_t i) {
    inner[i] = koranyiIntegrate(g, SpherePoint(sphere.points[i]), gamma, beta - n, cfg);
  });
  for (std::size_t i = 0; i < sphere.size(); ++i) out.tentSide += sphere.weights[i] * inner[i];
  if (out.tentSide == 0.0) {
    throw ParameterError("tent-side integral vanishes; ratio undefined");
  }
  out.ratio = out.ballSide / out.tentSide;
  return out;
}

namespace {

// Maximization over a box of parameters: tensor grid followed by local
// refinement around the best point.
struct BoxSearch {
  std::vector<std::vector<double>> grids;  // initial grid per coordinate
  std::vector<double> lower, upper;
  std::vector<bool> periodic;
  std::function<std::optional<double>(const std::vector<double>&)> eval;

  struct Best {
    double value = -std::numeric_limits<double>::infinity();
    std::vector<double> params;
    bool found = false;
  };

  Best run(int levels, std::vector<double>& trace) const {
    const std::size_t d = grids.size();
    std::size_t total = 1;
    for (const auto& g : grids) total *= g.size();
    const std::size_t rows = grids[0].size();
    const std::size_t perRow = total / rows;
    std::vector<Best> rowBest(rows);
    parallelFor(rows, [&](std::size_t r) {
      std::vector<double> x(d);
      x[0] = grids[0][r];
      for (std::size_t k = 0; k < perRow; ++k) {
        std::size_t rem = k;
        for (std::size_t j = d; j-- > 1;) {
          x[j] = grids[j][rem % grids[j].size()];
          rem /= grids[j].size();
        }
        const auto v = eval(x);
        if (v && *v > rowBest[r].value) rowBest[r] = {*v, x, true};
      }
    });
    Best best;
    for (const auto& b : rowBest) {
      if (b.found && b.value > best.value) best = b;
    }
    if (!best.found) return best;
    trace.push_back(best.value);
    // Local spacing around the argmax.
    std::vector<double> h(d);
    for (std::size_t j = 0; j < d; ++j) {
      const auto& g = grids[j];
      const auto it = std::lower_bound(g.begin(), g.end(), best.params[j] - 1e-15);
      const std::size_t idx = static_cast<std::size_t>(std::distance(g.begin(), it));
      double gap = 0.0;
      if (idx > 0) gap = std::max(gap, g[idx] - g[idx - 1]);
      if (idx + 1 < g.size()) gap = std::max(gap, g[idx + 1] - g[idx]);
      if (gap == 0.0) gap = upper[j] - lower[j];
      h[j] = gap;
    }
    std::size_t local = 1;
    for (std::size_t j = 0; j < d; ++j) local *= 9;
    for (int level = 0; level < levels; ++level) {
      Best cand = best;
      std::vector<double> x(d);
      for (std::size_t k = 0; k < local; ++k) {
        std::size_t rem = k;
        for (std::size_t j = 0; j < d; ++j) {
          const int off = static_cast<int>(rem % 9) - 4;
          rem /= 9;
          double v = best.params[j] + off * h[j] / 4.0;
          if (periodic[j]) {
            const double span = upper[j] - lower[j];
            v = lower[j] + std::fmod(std::fmod(v - lower[j], span) + span, span);
          } else {
            v = std::clamp(v, lower[j], upper[j]);
          }
          x[j] = v;
        }
        const auto val = eval(x);
        if (val && *val > cand.value) cand = {*val, x, true};
      }
      best = cand;
      trace.push_back(best.value);
      for (double& hj : h) hj *= 0.5;
    }
    return best;
  }
};

void checkFinite(double v, const CVec& z) {
  if (!std::isfinite(v)) detail::throwNonFinite(z, 0);
}

bool traceConverged(const std::vector<double>& trace) {
  if (trace.size() < 2) return true;
  const double a = trace[trace.size() - 2];
  const double b = trace.back();
  return std::abs(b - a) <= 1e-3 * std::max(std::abs(b), 1e-300) || b == a;
}

}  // namespace

SupResult gridSup(const RealFn& g, const QuadratureConfig& cfg, int refineLevels) {
  cfg.validateNodes();
  const int n = cfg.dimension;
  const double rmax = cfg.maxRadius;
  BoxSearch box;
  // Radii: uniform rows plus rows log-uniform in 1 - r toward the cutoff.
  std::vector<double> radii;
  const int R = cfg.radialNodes;
  for (int k = 0; k <= R; ++k) radii.push_back(rmax * k / R);
  for (int k = 1; k <= 2 * R; ++k) radii.push_back(1.0 - std::pow(1.0 - rmax, static_cast<double>(k) / (2 * R)));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
              radii.end());
  radii.back() = rmax;
  box.grids.push_back(radii);
  box.lower.push_back(0.0);
  box.upper.push_back(rmax);
  box.periodic.push_back(false);
  const int ma = n == 1 ? cfg.angularNodes : std::max(16, cfg.angularNodes / 8);
  std::vector<double> angles;
  for (int k = 0; k < ma; ++k) angles.push_back(kTwoPi * k / ma);
  if (n == 1) {
    box.grids.push_back(angles);
    box.lower.push_back(0.0);
    box.upper.push_back(kTwoPi);
    box.periodic.push_back(true);
  } else {
    std::vector<double> ts;
    for (int k = 0; k <= 8; ++k) ts.push_back(k / 8.0);
    box.grids.push_back(ts);
    box.lower.push_back(0.0);
    box.upper.push_back(1.0);
    box.periodic.push_back(false);
    for (int j = 0; j < 2; ++j) {
      box.grids.push_back(angles);
      box.lower.push_back(0.0);
      box.upper.push_back(kTwoPi);
      box.periodic.push_back(true);
    }
  }
  auto toPoint = [n](const std::vector<double>& x) {
    if (n == 1) return CVec(std::polar(x[0], x[1]));
    return CVec(std::polar(x[0] * std::sqrt(x[1]), x[2]), std::polar(x[0] * std::sqrt(1.0 - x[1]), x[3]));
  };
  box.eval = [&](const std::vector<double>& x) -> std::optional<double> {
    const CVec z = toPoint(x);
    const double v = g(z);
    checkFinite(v, z);
    return v;
  };
  SupResult out;
  const auto best = box.run(refineLevels, out.refinementTrace);
  out.value = best.value;
  out.argmax = toPoint(best.params);
  out.atCutoff = best.params[0] >= rmax * (1.0 - 1e-12) && rmax > 0.0;
  out.stable = traceConverged(out.refinementTrace);
  out.converged = out.stable && !out.atCutoff;
  return out;
}

SupResult regionSup(const RealFn& g, const BoundaryRegion& region, const QuadratureConfig& cfg, int refineLevels) {
  cfg.validateNodes();
  const RegionChart chart(region);
  SupResult out;
  const double Phi = chart.phiMax();
  if (!(Phi > 0.0)) {
    out.converged = true;
    out.argmax = CVec::zero(chart.dim());
    return out;
  }
  const int n = chart.dim();
  BoxSearch box;
  const int ms = std::max(16, cfg.angularNodes / 4);
  std::vector<double> sg, tg;
  for (int k = 0; k <= ms; ++k) sg.push_back(-1.0 + 2.0 * k / ms);
  for (int k = 0; k <= cfg.radialNodes; ++k) tg.push_back(static_cast<double>(k) / cfg.radialNodes);
  box.grids = {sg, tg};
  box.lower = {-1.0, 0.0};
  box.upper = {1.0, 1.0};
  box.periodic = {false, false};
  if (n == 2) {
    std::vector<double> ug, pg;
    for (int k = 0; k <= 4; ++k) ug.push_back(k / 4.0);
    for (int k = 0; k < 8; ++k) pg.push_back(kTwoPi * k / 8);
    box.grids.push_back(ug);
    box.grids.push_back(pg);
    box.lower.insert(box.lower.end(), {0.0, 0.0});
    box.upper.insert(box.upper.end(), {1.0, kTwoPi});
    box.periodic.insert(box.periodic.end(), {false, true});
  }
  auto toPoint = [&](const std::vector<double>& x) -> std::optional<CVec> {
    const double phi = x[0] * Phi;
    const auto [lo, hi] = chart.rhoRange(phi);
    if (!(hi > lo)) return std::nullopt;
    const double base = lo > 0.0 ? lo : 1e-12 * hi;
    const double rho = base * std::pow(hi / base, x[1]);
    if (n == 1) return chart.point(rho, phi);
    const double h = chart.transverseRadiusSq(rho, phi);
    return chart.point(rho, phi, std::polar(std::sqrt(x[2] * h), x[3]));
  };
  box.eval = [&](const std::vector<double>& x) -> std::optional<double> {
    const auto z = toPoint(x);
    if (!z) return std::nullopt;
    const double v = g(*z);
    checkFinite(v, *z);
    return v;
  };
  const auto best = box.run(refineLevels, out.refinementTrace);
  if (!best.found) {
    out.converged = true;
    out.argmax = CVec::zero(n);
    return out;
  }
  out.value = best.value;
  out.argmax = *toPoint(best.params);
  out.atCutoff = chart.hasCutoff() && out.argmax.norm() >= chart.cutoffRadius() - 1e-9;
  out.stable = traceConverged(out.refinementTrace);
  out.converged = out.stable && !out.atCutoff;
  return out;
}

std::vector<double> cutoffLadder(double maxRadius) {
  if (!(maxRadius > 0.5 && maxRadius < 1.0)) throw ParameterError("maxRadius must lie in (0.5, 1)");
  const double eps = 1.0 - maxRadius;
  if (1.0 - 10.0 * eps >= 0.5) return {1.0 - 10.0 * eps, 1.0 - 5.0 * eps, maxRadius};
  return {1.0 - 4.0 * eps, 1.0 - 2.0 * eps, maxRadius};
}

BoundaryLimit boundaryLimit(const std::vector<double>& radii, const std::vector<double>& values) {
  if (radii.size() != 3 || values.size() != 3) throw ParameterError("boundaryLimit expects three levels");
  BoundaryLimit out;
  out.trace = values;
  out.finest = values[2];
  out.value = values[2];
  const double e1 = 1.0 - radii[0], e2 = 1.0 - radii[1], e3 = 1.0 - radii[2];
  const double d1 = values[1] - values[0];
  const double d2 = values[2] - values[1];
  const double scale = std::max({std::abs(values[0]), std::abs(values[1]), std::abs(values[2])});
  const double tiny = 1e-12 * scale + 1e-300;
  if (std::abs(d1) <= tiny && std::abs(d2) <= tiny) {
    out.converged = true;
    return out;
  }
  // Increment ratio normalized by the ratio a linear-in-eps approach would give;
  // values near 1 mean saturation, large values mean growth like log or a power of 1/eps.
  const double linear = (e2 - e3) / (e1 - e2);
  const double ratio = std::abs(d1) > tiny ? (d2 / d1) / linear : std::numeric_limits<double>::infinity();
  if (!(ratio <= 2.0) && d2 > tiny) {
    out.converged = false;
    return out;
  }
  out.converged = true;
  // Quadratic fit v = L + B eps + C eps^2 through the three levels, evaluated at 0.
  const double l1 = e2 * e3 / ((e1 - e2) * (e1 - e3));
  const double l2 = e1 * e3 / ((e2 - e1) * (e2 - e3));
  const double l3 = e1 * e2 / ((e3 - e1) * (e3 - e2));
  const double extrap = l1 * values[0] + l2 * values[1] + l3 * values[2];
  if (std::isfinite(extrap) && std::abs(extrap - values[2]) <= 2.0 * std::abs(d2)) out.value = extrap;
  return out;
}

}  // namespace volterra
