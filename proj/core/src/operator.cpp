#include "volterra/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "volterra/carleson.hpp"
#include "volterra/gauss_kronrod.hpp"
#include "volterra/parallel.hpp"

namespace volterra {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Coeffs = std::map<MultiIndex, cplx>;

std::optional<Coeffs> seriesOf(const Symbol& s) {
  Coeffs out;
  for (const auto& term : s.terms()) {
    const auto* ps = std::get_if<Symbol::PowerSeries>(&term.family);
    if (!ps) return std::nullopt;
    for (const auto& [m, c] : ps->coeffs) out[m] += term.weight * c;
  }
  return out;
}

MultiIndex addIndex(const MultiIndex& a, const MultiIndex& b) {
  return a.n == 1 ? MultiIndex(a.e[0] + b.e[0]) : MultiIndex(a.e[0] + b.e[0], a.e[1] + b.e[1]);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

cplx applyJb(const Symbol& b, const Symbol& f, const CVec& z, double tol) {
  if (b.dim() != f.dim() || b.dim() != z.dim()) throw DomainError("dimension mismatch in J_b f");
  if (!(z.normSq() < 1.0)) throw DomainError("J_b f evaluated outside the open ball");
  if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
  if (b.isConstant()) return 0.0;
  // Rb(tz) = O(t), so the integrand stays bounded as t -> 0; Kronrod nodes avoid t = 0 itself.
  auto g = [&](double t) {
    const CVec w = z * cplx(t);
    return f(w) * b.radial(w) / t;
  };
  const auto r = integrateAdaptive(g, 0.0, 1.0, tol, tol, 4000, 1);
  if (!r.converged) {
    std::ostringstream os;
    os << "J_b f quadrature did not reach tolerance " << tol << "; estimated error " << r.error;
    throw ConvergenceError(os.str(), r.error);
  }
  return r.value;
}

std::optional<Symbol> jbExact(const Symbol& b, const Symbol& f) {
  if (b.dim() != f.dim()) throw DomainError("dimension mismatch in J_b f");
  const auto bc = seriesOf(b);
  const auto fc = seriesOf(f);
  if (!bc || !fc) return std::nullopt;
  Coeffs out;
  for (const auto& [mb, cb] : *bc) {
    const int kb = mb.order();
    if (kb == 0 || cb == 0.0) continue;
    for (const auto& [mf, cf] : *fc) {
      if (cf == 0.0) continue;
      const MultiIndex m = addIndex(mb, mf);
      out[m] += cf * cb * static_cast<double>(kb) / static_cast<double>(m.order());
    }
  }
  return Symbol::powerSeries(b.dim(), out);
}

Evaluable jbEvaluable(const Symbol& b, const Symbol& f, double tol) {
  if (auto exact = jbExact(b, f)) return asEvaluable(*exact);
  Evaluable e;
  e.dim = b.dim();
  e.value = [b, f, tol](const CVec& z) { return applyJb(b, f, z, tol); };
  // Both factors extend across the sphere, hence so does J_b f.
  e.boundaryRegular = b.boundaryRegular() && f.boundaryRegular();
  e.peak = f.peak() ? f.peak() : b.peak();
  return e;
}

std::vector<CVec> interiorGrid(int n) {
  std::vector<CVec> pts;
  for (int i = 0; i < 10; ++i) {
    const double r = 0.05 + 0.09 * i;
    for (int j = 0; j < 10; ++j) {
      const double th = kTwoPi * (j + 0.3) / 10.0;
      if (n == 1) {
        pts.emplace_back(std::polar(r, th));
      } else {
        CVec z = CVec::zero(2);
        z[0] = std::polar(r * std::cos(0.6), th);
        z[1] = std::polar(r * std::sin(0.6), -0.5 * th);
        pts.push_back(z);
      }
    }
  }
  return pts;
}

double radialIdentityResidual(const Symbol& b, const Symbol& f, const QuadratureConfig& cfg) {
  cfg.validateNodes();
  const auto pts = interiorGrid(b.dim());
  std::vector<double> res(pts.size());
  parallelFor(pts.size(), [&](std::size_t i) {
    const CVec& z = pts[i];
    const cplx lhs = contourRadialDerivative([&](const CVec& w) { return applyJb(b, f, w, 1e-13); }, z);
    res[i] = std::abs(lhs - f(z) * b.radial(z));
  });
  return *std::max_element(res.begin(), res.end());
}

std::vector<Probe> expandProbes(const ProbeFamily& family, const Symbol& b, const SpaceParams& params) {
  params.validate();
  const int n = params.n;
  std::vector<Probe> out;
  if (const auto* nk = std::get_if<NecessityKernels>(&family)) {
    const double s = nk->s > 0.0 ? nk->s : (n + 1.0 + params.alpha) / params.p + 1.0;
    std::vector<SpherePoint> dirs;
    if (n == 1) {
      for (int k = 0; k < nk->directions; ++k) dirs.push_back(SpherePoint::fromAngle(kTwoPi * k / nk->directions));
    } else {
      const auto grid = directionGrid(2);
      const int step = std::max<int>(1, static_cast<int>(grid.size()) / std::max(1, nk->directions));
      for (std::size_t k = 0; k < grid.size() && static_cast<int>(dirs.size()) < nk->directions; k += step) {
        dirs.push_back(grid[k]);
      }
    }
    if (auto pk = b.peak()) dirs.push_back(SpherePoint::normalized(*pk));
    for (double r : nk->radii) {
      for (std::size_t d = 0; d < dirs.size(); ++d) {
        const BallPoint z(dirs[d].coords() * cplx(r));
        out.push_back({necessityTestFunction(z, s, params.p, params.alpha),
                       "kernel r=" + fmt(r) + " dir=" + std::to_string(d)});
      }
    }
  } else if (const auto* mo = std::get_if<Monomials>(&family)) {
    for (int m = 0; m <= mo->maxDegree; ++m) {
      if (n == 1) {
        out.push_back({Symbol::monomial(MultiIndex(m)), "z^" + std::to_string(m)});
      } else {
        for (int k = 0; k <= m; ++k) {
          out.push_back({Symbol::monomial(MultiIndex(m - k, k)),
                         "z1^" + std::to_string(m - k) + " z2^" + std::to_string(k)});
        }
      }
    }
  } else if (const auto* rp = std::get_if<RandomPolynomials>(&family)) {
    std::mt19937_64 rng(rp->seed);
    std::normal_distribution<double> N01;
    for (int c = 0; c < rp->count; ++c) {
      std::map<MultiIndex, cplx> coeffs;
      for (int m = 0; m <= rp->degree; ++m) {
        if (n == 1) {
          coeffs[MultiIndex(m)] = cplx(N01(rng), N01(rng));
        } else {
          for (int k = 0; k <= m; ++k) coeffs[MultiIndex(m - k, k)] = cplx(N01(rng), N01(rng));
        }
      }
      out.push_back({Symbol::powerSeries(n, coeffs), "random poly seed=" + std::to_string(rp->seed) + " #" +
                                                         std::to_string(c)});
    }
  } else {
    const auto& at = std::get<Atoms>(family);
    if (at.lattice.n != n) throw DomainError("lattice dimension differs from the space");
    const std::size_t N = at.lattice.size();
    if (N == 0) throw ParameterError("atom probes need a nonempty lattice");
    const double s = n * std::max(1.0, 1.0 / params.p) - n / params.p + 1.0;
    std::mt19937_64 rng(at.seed);
    for (int c = 0; c < at.count; ++c) {
      std::vector<std::size_t> idx(N);
      for (std::size_t k = 0; k < N; ++k) idx[k] = k;
      std::shuffle(idx.begin(), idx.end(), rng);
      const std::size_t m = std::min<std::size_t>(N, static_cast<std::size_t>(std::max(1, at.sparsity)));
      std::vector<BallPoint> pts;
      std::vector<cplx> lam;
      for (std::size_t k = 0; k < m; ++k) {
        pts.push_back(at.lattice.points[idx[k]]);
        lam.push_back((rng() & 1U) ? 1.0 : -1.0);
      }
      out.push_back({atomSynthesis(pts, lam, s, params.p, params.alpha), "atoms #" + std::to_string(c)});
    }
  }
  return out;
}

std::vector<ProbeFamily> defaultProbes() { return {Monomials{8}, NecessityKernels{}}; }

OpNormBound opNormLowerBound(const Symbol& b, const SpaceParams& params, const std::vector<Probe>& probes,
                             const QuadratureConfig& cfg) {
  params.validate();
  cfg.validate();
  if (probes.empty()) throw ParameterError("probe family is empty");
  OpNormBound out;
  out.rows.resize(probes.size());
  parallelFor(probes.size(), [&](std::size_t i) {
    ProbeRow& row = out.rows[i];
    row.label = probes[i].label;
    const NormResult bn = bergmanNorm(probes[i].f, params.p, params.alpha, cfg);
    row.bergman = bn.value;
    if (!(bn.value > 1e-300)) throw ParameterError("probe '" + row.label + "' has vanishing Bergman norm");
    if (b.isConstant()) return;
    const NormResult hn = hardyNorm(jbEvaluable(b, probes[i].f), params.q, cfg);
    row.hardy = hn.value;
    row.ratio = hn.value / bn.value;
    row.converged = hn.converged && bn.converged;
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (out.rows[i].ratio > out.rows[best].ratio) best = i;
  }
  out.value = out.rows[best].ratio;
  out.bestProbe = out.rows[best].label;
  out.converged = out.rows[best].converged;
  return out;
}

OpNormBound opNormLowerBound(const Symbol& b, const SpaceParams& params, const std::vector<ProbeFamily>& probes,
                             const QuadratureConfig& cfg) {
  std::vector<Probe> all;
  for (const auto& fam : probes) {
    auto p = expandProbes(fam, b, params);
    all.insert(all.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  }
  return opNormLowerBound(b, params, all, cfg);
}

}  // namespace volterra
