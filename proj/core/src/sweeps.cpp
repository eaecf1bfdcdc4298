#include "volterra/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "volterra/lattice.hpp"
#include "volterra/norms.hpp"
#include "volterra/parallel.hpp"

namespace volterra {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require(bool ok, const std::string& inequality, const std::string& values) {
  if (!ok) throw ParameterError("hypothesis " + inequality + " violated (" + values + ")");
}

// int_D h(u, 1 - |u|^2) dA/pi on boundary-graded nodes centred at e^{i angle}.
template <class H>
double diskIntegral(H&& h, double angle, const QuadratureConfig& cfg) {
  QuadratureConfig c = cfg;
  c.dimension = 1;
  const NodeSet nodes = regionNodes(wholeBallRegion(SpherePoint::fromAngle(angle)), c);
  return integrateNodesDefect(nodes, [&](const CVec& u, double d) { return h(u[0], d); });
}

// For n = 2 and integrands depending on u_1 only, integrating out u_2 gives
// int_B f(u_1) (1 - |u|^2)^w dV = 2/(w+1) int_D f(u_1) (1 - |u_1|^2)^{w+1} dA/pi.
double ballWeighted(const std::function<double(cplx)>& f, double w, int n, double angle, const QuadratureConfig& cfg) {
  if (n == 1) {
    return diskIntegral([&](cplx u, double d) { return f(u) * std::pow(d, w); }, angle, cfg);
  }
  return 2.0 / (w + 1.0) *
         diskIntegral([&](cplx u, double d) { return f(u) * std::pow(d, w + 1.0); }, angle, cfg);
}

double ictbnSphere(double rho, const LemmaExponents& e, const QuadratureConfig& cfg) {
  const double c = e.n + e.s;
  if (e.n == 1) {
    const RealFn g = [&](const CVec& xi) { return std::pow(std::abs(1.0 - rho * xi[0]), -c); };
    const auto r = sphereIntegrateAdaptive(g, 1, 1e-10);
    if (!r.converged) throw ConvergenceError("sphere sweep integral did not converge", r.errorEstimate);
    return r.value;
  }
  // On S^3 the first coordinate is uniformly distributed over the unit disc.
  return diskIntegral([&](cplx w, double) { return std::pow(std::abs(1.0 - rho * w), -c); }, 0.0, cfg);
}

double ictbnBall(double rho, const LemmaExponents& e, const QuadratureConfig& cfg) {
  const double c = e.n + 1.0 + e.t + e.s;
  return ballWeighted([&](cplx u) { return std::pow(std::abs(1.0 - rho * u), -c); }, e.t, e.n, 0.0, cfg);
}

// z = rho e_1 and a = rho e^{i(1 - rho)} e_1: both approach the sphere, |1 - <z, a>| ~ 1 - rho.
std::pair<cplx, cplx> frPoints(double rho) { return {cplx(rho), std::polar(rho, 1.0 - rho)}; }

double frGeneral(double rho, const LemmaExponents& e, const QuadratureConfig& cfg) {
  const auto [z, a] = frPoints(rho);
  return ballWeighted(
      [&](cplx u) {
        return std::pow(std::abs(1.0 - std::conj(z) * u), -e.r) * std::pow(std::abs(1.0 - std::conj(a) * u), -e.t);
      },
      e.s, e.n, 0.5 * (1.0 - rho), cfg);
}

std::vector<BallPoint> gammaAtoms(double rho) {
  std::vector<BallPoint> pts;
  for (int j = 0; j < 3; ++j) pts.emplace_back(CVec(std::polar(rho, j * (1.0 - rho))));
  return pts;
}

}  // namespace

std::string toString(KernelLemma lemma) {
  switch (lemma) {
    case KernelLemma::IctBnSphere: return "IctBn-sphere";
    case KernelLemma::IctBnBall: return "IctBn-ball";
    case KernelLemma::DiscreteL2: return "discrete-l2";
    case KernelLemma::FRGeneral: return "FR-general";
    case KernelLemma::GammaLemma: return "Gamma-lemma";
  }
  return "?";
}

KernelLemma kernelLemmaFromString(const std::string& name) {
  for (auto l : {KernelLemma::IctBnSphere, KernelLemma::IctBnBall, KernelLemma::DiscreteL2, KernelLemma::FRGeneral,
                 KernelLemma::GammaLemma}) {
    if (toString(l) == name) return l;
  }
  throw ParameterError("unknown lemma '" + name + "'");
}

void checkLemmaHypotheses(KernelLemma lemma, const LemmaExponents& e) {
  require(e.n == 1 || e.n == 2, "n in {1, 2}", "n = " + std::to_string(e.n));
  const double n = e.n;
  switch (lemma) {
    case KernelLemma::IctBnBall:
      require(e.t > -1.0, "t > -1", "t = " + fmt(e.t));
      [[fallthrough]];
    case KernelLemma::IctBnSphere:
      require(e.s > 0.0, "s > 0", "s = " + fmt(e.s));
      return;
    case KernelLemma::DiscreteL2:
      require(e.n == 1, "n = 1 for lattice sums", "n = " + std::to_string(e.n));
      require(e.t > n, "n < t", "t = " + fmt(e.t) + ", n = " + std::to_string(e.n));
      require(e.t < e.s, "t < s", "t = " + fmt(e.t) + ", s = " + fmt(e.s));
      require(e.latticeR > 0.0 && e.latticeR <= 0.5, "0 < lattice r <= 0.5", "r = " + fmt(e.latticeR));
      return;
    case KernelLemma::FRGeneral: {
      const std::string v = "s = " + fmt(e.s) + ", r = " + fmt(e.r) + ", t = " + fmt(e.t);
      require(e.s > -1.0, "s > -1", v);
      require(e.r > 0.0 && e.r < e.s + n + 1.0, "s + n + 1 > r > 0", v);
      require(e.t > 0.0 && e.t < e.s + n + 1.0, "s + n + 1 > t > 0", v);
      require(e.r + e.t - e.s > n + 1.0, "r + t - s > n + 1", v);
      return;
    }
    case KernelLemma::GammaLemma:
      require(e.n == 1, "n = 1 for shadow-arc tent integrals", "n = " + std::to_string(e.n));
      require(e.s > 0.0, "0 < s", "s = " + fmt(e.s));
      require(e.theta > n * std::max(1.0, 1.0 / e.s), "theta > n max(1, 1/s)",
              "theta = " + fmt(e.theta) + ", s = " + fmt(e.s));
      return;
  }
}

std::vector<double> sweepRadii(KernelLemma lemma) {
  int lo = 0, hi = 9;
  if (lemma == KernelLemma::DiscreteL2) hi = 6;
  if (lemma == KernelLemma::GammaLemma) lo = 1;
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(1.0 - std::pow(10.0, -k / 3.0));
  return out;
}

bool monotoneDivergence(const std::vector<double>& values) {
  if (values.size() < 5) return false;
  const std::size_t b = values.size() - 5;
  for (std::size_t i = b + 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) return false;
  }
  const double first = values[b + 1] - values[b];
  const double last = values.back() - values[values.size() - 2];
  // A logarithmic divergence keeps increments constant on the geometric radius grid.
  return values.back() > 1.01 * values[b] && last >= 0.75 * first;
}

SweepTable kernelEstimateSweep(KernelLemma lemma, const LemmaExponents& e, const QuadratureConfig& cfg) {
  return kernelEstimateSweep(lemma, e, cfg, sweepRadii(lemma));
}

SweepTable kernelEstimateSweep(KernelLemma lemma, const LemmaExponents& e, const QuadratureConfig& cfg,
                               const std::vector<double>& radii) {
  checkLemmaHypotheses(lemma, e);
  cfg.validateNodes();
  if (radii.empty()) throw ParameterError("sweep needs at least one radius");
  for (double r : radii) {
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("sweep radii must lie in [0, 1)");
  }
  SweepTable out;
  out.lemma = lemma;
  out.exponents = e;
  out.rows.resize(radii.size());

  Lattice Z;
  if (lemma == KernelLemma::DiscreteL2) {
    // Truncate well outside the outermost base point so the missing tail stays small.
    const double outer = *std::max_element(radii.begin(), radii.end());
    Z = buildLattice(e.latticeR, std::clamp(1.0 - (1.0 - outer) / 20.0, 0.95, 0.99995), 1);
  }
  SpaceParams sp;
  sp.aperture = e.aperture;

  parallelFor(radii.size(), [&](std::size_t i) {
    const double rho = radii[i];
    SweepRow& row = out.rows[i];
    row.radius = rho;
    const double d = (1.0 - rho) * (1.0 + rho);
    switch (lemma) {
      case KernelLemma::IctBnSphere:
        row.lhs = ictbnSphere(rho, e, cfg);
        row.majorant = std::pow(d, -e.s);
        break;
      case KernelLemma::IctBnBall:
        row.lhs = ictbnBall(rho, e, cfg);
        row.majorant = std::pow(d, -e.s);
        break;
      case KernelLemma::DiscreteL2: {
        double sum = 0.0;
        for (const auto& a : Z.points) {
          const cplx ak = a.coords()[0];
          sum += std::pow(1.0 - std::norm(ak), e.t) / std::pow(std::abs(1.0 - rho * ak), e.s);
        }
        row.lhs = sum;
        row.majorant = std::pow(d, e.t - e.s);
        break;
      }
      case KernelLemma::FRGeneral: {
        const auto [z, a] = frPoints(rho);
        row.lhs = frGeneral(rho, e, cfg);
        row.majorant = std::pow(std::abs(1.0 - z * std::conj(a)), -(e.r + e.t - e.s - e.n - 1.0));
        break;
      }
      case KernelLemma::GammaLemma: {
        const auto atoms = gammaAtoms(rho);
        const RealFn g = [&](const CVec& xi) {
          double inner = 0.0;
          for (const auto& a : atoms) {
            const cplx ak = a.coords()[0];
            inner += std::pow((1.0 - std::norm(ak)) / std::abs(1.0 - std::conj(ak) * xi[0]), e.theta);
          }
          return std::pow(inner, e.s);
        };
        const auto r = sphereIntegrateAdaptive(g, 1, 1e-10);
        if (!r.converged) throw ConvergenceError("Gamma-lemma sphere integral did not converge", r.errorEstimate);
        row.lhs = r.value;
        Lattice atomsZ;
        atomsZ.points = atoms;
        atomsZ.n = 1;
        // int_S mu(Gamma(xi))^s dsigma is the s-th power of a T^s_1 sequence norm with unit entries.
        row.majorant = std::pow(tentSeqNorm(TentSequence(atoms.size(), 1.0), atomsZ, e.s, 1.0, sp), e.s);
        break;
      }
    }
    row.ratio = row.majorant > 0.0 ? row.lhs / row.majorant : 0.0;
  });
  std::vector<double> ratios;
  for (const auto& row : out.rows) {
    ratios.push_back(row.ratio);
    out.maxRatio = std::max(out.maxRatio, row.ratio);
  }
  out.monotoneDivergence = monotoneDivergence(ratios);
  return out;
}

}  // namespace volterra
