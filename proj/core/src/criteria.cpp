#include "volterra/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "volterra/carleson.hpp"

namespace volterra {

namespace {

void requireMatching(const Symbol& b, const SpaceParams& params, const QuadratureConfig& cfg) {
  params.validate();
  cfg.validate();
  if (b.dim() != params.n || cfg.dimension != params.n) {
    throw DomainError("symbol, parameters and quadrature config must share the dimension");
  }
}

NormResult zeroResult(const QuadratureConfig& cfg, const std::string& method) {
  NormResult r;
  r.resolution = tagOf(cfg, method);
  return r;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

RealFn absRadial(const Symbol& b) {
  return [b](const CVec& z) { return std::abs(b.radial(z)); };
}

// Powers of 1 - |z|^2 for the region integrands; the symbol is never evaluated on the sphere.
RealFn weightedAbsRadial(const Symbol& b, double e) {
  return [b, e](const CVec& z) {
    const double d = 1.0 - z.normSq();
    if (!(d > 0.0)) return 0.0;
    const double v = std::abs(b.radial(z));
    return v == 0.0 ? 0.0 : v * std::pow(d, e);
  };
}

NormResult carlesonPower(const Symbol& b, double weightExp, double power, double root, const QuadratureConfig& cfg,
                         const std::string& method) {
  // Measure |Rb|^power (1 - |z|^2)^weightExp dV, Carleson constant at s = 1, reported to the 1/root.
  const MeasureSpec mu = MeasureSpec::density(
      b.dim(),
      [b, weightExp, power](const CVec& z) {
        const double d = 1.0 - z.normSq();
        if (!(d > 0.0)) return 0.0;
        const double r = std::abs(b.radial(z));
        return r == 0.0 ? 0.0 : std::pow(r, power) * std::pow(d, weightExp);
      },
      b.peak());
  const KernelConstant k = carlesonKernelConstant(mu, 1.0, 1.0, cfg);
  NormResult out;
  out.resolution = tagOf(cfg, method);
  out.value = std::pow(k.value, 1.0 / root);
  for (double l : k.levelSup) out.trace.push_back(std::pow(l, 1.0 / root));
  out.converged = !k.divergent;
  return out;
}

}  // namespace

std::string toString(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::Item1: return "Item1";
    case RegimeLabel::Item2: return "Item2";
    case RegimeLabel::Item3: return "Item3";
    case RegimeLabel::Item4: return "Item4";
  }
  return "?";
}

std::string toString(HardyBergmanCase c) {
  switch (c) {
    case HardyBergmanCase::EqualExponents: return "(i) p = q";
    case HardyBergmanCase::SmallerP: return "(ii) p < q";
    case HardyBergmanCase::LargerP: return "(iii) q < p";
  }
  return "?";
}

Regime classifyRegime(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0) || std::isinf(p) || std::isinf(q)) {
    throw ParameterError("p and q must be positive and finite");
  }
  Regime r;
  if (p <= std::min(2.0, q)) {
    r.label = RegimeLabel::Item1;
    if (p == q) {
      r.boundaryRule = "p = q <= 2: shared boundary of Item1 and Item4, assigned to Item1";
    } else if (p == 2.0) {
      r.boundaryRule = "p = 2 < q: p <= min(2, q)";
    } else {
      r.boundaryRule = "p <= min(2, q)";
    }
  } else if (p > 2.0 && p < q) {
    r.label = RegimeLabel::Item1;
    r.boundaryRule = "2 < p < q";
  } else if (p > 2.0 && p == q) {
    r.label = RegimeLabel::Item2;
    r.boundaryRule = "2 < p = q";
  } else if (p > 2.0) {
    r.label = RegimeLabel::Item3;
    r.boundaryRule = "p > max(2, q)";
  } else {
    r.label = RegimeLabel::Item4;
    r.boundaryRule = p == 2.0 ? "q < p = 2: shared boundary of Item3 and Item4, assigned to Item4" : "q < p <= 2";
  }
  return r;
}

Regime classifyRegime(const SpaceParams& params) {
  params.validate();
  Regime r = classifyRegime(params.p, params.q);
  if (r.label == RegimeLabel::Item1) {
    r.gammaExp = params.n / params.q + 1.0 - (params.n + 1.0 + params.alpha) / params.p;
  }
  return r;
}

Triviality trivialityCheck(const SpaceParams& params) {
  params.validate();
  const double n = params.n, p = params.p, q = params.q, a = params.alpha;
  Triviality t;
  if (p < q) {
    const double rhs = n * (p / q - 1.0) - 1.0;
    t.trivial = a - p > rhs;
    t.clause = "p < q: alpha - p = " + fmt(a - p) + (t.trivial ? " > " : " <= ") + "n(p/q - 1) - 1 = " + fmt(rhs);
  } else {
    t.trivial = a - p > -1.0;
    t.clause = "q <= p: alpha - p = " + fmt(a - p) + (t.trivial ? " > " : " <= ") + "-1";
  }
  return t;
}

TentExponents uExponents(const SpaceParams& params) {
  const double p = params.p, q = params.q;
  if (!(p > std::max(2.0, q))) throw ParameterError("U_b exponents need p > max(2, q)");
  return {p * q / (p - q), 2.0 * p / (p - 2.0), (2.0 - 2.0 * params.alpha) / (p - 2.0) + 1.0 - params.n};
}

double vWeightExponent(const SpaceParams& params) { return (params.p - 1.0 - params.alpha) / params.p; }

CriterionReport criterionValue(const Symbol& b, const SpaceParams& params, const QuadratureConfig& cfg) {
  requireMatching(b, params, cfg);
  CriterionReport rep;
  rep.params = params;
  rep.regime = classifyRegime(params);
  rep.triviality = trivialityCheck(params);
  const double p = params.p;
  switch (rep.regime.label) {
    case RegimeLabel::Item1:
      rep.criterion = b.isConstant() ? zeroResult(cfg, "constant symbol")
                                     : blochSeminorm(b, *rep.regime.gammaExp, cfg);
      break;
    case RegimeLabel::Item2: {
      if (b.isConstant()) {
        rep.criterion = zeroResult(cfg, "constant symbol");
        break;
      }
      const double e = 2.0 * p / (p - 2.0);
      rep.criterion = carlesonPower(b, (p - 2.0 * params.alpha) / (p - 2.0), e, e, cfg,
                                    "kernel Carleson constant of the symbol measure, power (p-2)/(2p)");
      break;
    }
    case RegimeLabel::Item3: {
      const TentExponents u = uExponents(params);
      rep.criterion = b.isConstant() ? zeroResult(cfg, "constant symbol")
                                     : tentFunctionNorm(absRadial(b), u.outer, u.inner, u.beta, params, cfg);
      break;
    }
    case RegimeLabel::Item4: {
      const double outer = p * params.q / (p - params.q);
      rep.criterion = b.isConstant()
                          ? zeroResult(cfg, "constant symbol")
                          : tentFunctionNorm(weightedAbsRadial(b, vWeightExponent(params)), outer, kInfinity, 0.0,
                                             params, cfg);
      break;
    }
  }
  rep.resolution = rep.criterion.resolution;
  return rep;
}

void attachOpNormLowerBound(CriterionReport& report, const Symbol& b, const std::vector<ProbeFamily>& probes,
                            const QuadratureConfig& cfg) {
  report.opNormLower = opNormLowerBound(b, report.params, probes, cfg);
}

HardyBergmanReport hardyToBergmanCriterion(const Symbol& b, const SpaceParams& params, const QuadratureConfig& cfg) {
  requireMatching(b, params, cfg);
  HardyBergmanReport rep;
  rep.params = params;
  const double n = params.n, p = params.p, q = params.q, a = params.alpha;
  if (p == q) {
    rep.kase = HardyBergmanCase::EqualExponents;
    rep.criterion = b.isConstant() ? zeroResult(cfg, "constant symbol")
                                   : carlesonPower(b, p + a, p, p, cfg, "kernel Carleson constant, power 1/p");
  } else if (p < q) {
    rep.kase = HardyBergmanCase::SmallerP;
    rep.gammaExp = 1.0 + (n + 1.0 + a) / q - n / p;
    rep.criterion = b.isConstant() ? zeroResult(cfg, "constant symbol") : blochSeminorm(b, *rep.gammaExp, cfg);
  } else {
    rep.kase = HardyBergmanCase::LargerP;
    if (b.isConstant()) {
      rep.criterion = zeroResult(cfg, "constant symbol");
    } else {
      const Symbol bb = b;
      RealFn g = [bb, q](const CVec& z) {
        const double v = std::abs(bb.radial(z));
        return v == 0.0 ? 0.0 : std::pow(v, q);
      };
      rep.criterion = tentFunctionNorm(g, p / (p - q), 1.0, q + a - n, params, cfg);
    }
  }
  return rep;
}

double hardyBergmanDensity(const Symbol& b, const SpherePoint& zeta, const SpaceParams& params,
                           const QuadratureConfig& cfg) {
  requireMatching(b, params, cfg);
  if (b.isConstant()) return 0.0;
  const double q = params.q;
  RealFn g = [&b, q](const CVec& z) {
    const double v = std::abs(b.radial(z));
    return v == 0.0 ? 0.0 : std::pow(v, q);
  };
  return koranyiIntegrate(g, zeta, params.aperture, q + params.alpha - params.n, cfg);
}

DiscretizationReport discretizationCheck(const Symbol& b, const SpaceParams& params, double r,
                                         const QuadratureConfig& cfg, double rmax) {
  requireMatching(b, params, cfg);
  if (params.n != 1) throw DomainError("discretization checks need n = 1 (lattices are planar)");
  if (!(r == 0.1 || r == 0.2 || r == 0.3)) throw ParameterError("lattice parameter r must be 0.1, 0.2 or 0.3");
  DiscretizationReport rep;
  rep.r = r;
  rep.rmax = rmax;
  const Lattice Z = buildLattice(r, rmax, 1);
  rep.latticeSize = Z.size();
  rep.latticeValid = Z.certificate.valid();

  const double p = params.p, q = params.q, n = params.n;
  rep.areaExponents = p > std::max(2.0, q) ? uExponents(params) : TentExponents{p, q, params.alpha};
  rep.supOuter = q < p ? p * q / (p - q) : p;
  const double vExp = vWeightExponent(params);
  if (b.isConstant()) {
    rep.area.exactZero = rep.sup.exactZero = true;
    return rep;
  }

  // Continuous sides truncated at the lattice radius: the finest ladder level.
  const QuadratureConfig c = cfg.withMaxRadius(rmax);
  const TentExponents& e = rep.areaExponents;
  rep.area.continuous = tentFunctionNorm(absRadial(b), e.outer, e.inner, e.beta, params, c).trace.back();
  rep.sup.continuous =
      tentFunctionNorm(weightedAbsRadial(b, vExp), rep.supOuter, kInfinity, 0.0, params, c).trace.back();

  TentSequence areaSeq(Z.size()), supSeq(Z.size());
  for (std::size_t k = 0; k < Z.size(); ++k) {
    const CVec& a = Z.points[k].coords();
    const double d = 1.0 - a.normSq();
    const double v = std::abs(b.radial(a));
    areaSeq[k] = v * std::pow(d, (n + 1.0 + e.beta) / e.inner);
    supSeq[k] = v * std::pow(d, vExp);
  }
  auto fill = [&](DiscretizationSide& side, const TentSequence& seq, double outer, double inner) {
    SpaceParams wide = params;
    side.discrete = tentSeqNorm(seq, Z, outer, inner, params);
    wide.aperture = Aperture(4.0);
    side.discreteWide4 = tentSeqNorm(seq, Z, outer, inner, wide);
    wide.aperture = Aperture(8.0);
    side.discreteWide8 = tentSeqNorm(seq, Z, outer, inner, wide);
    if (side.continuous == 0.0 && side.discrete == 0.0) {
      side.exactZero = true;
    } else {
      side.ratio = side.discrete > 0.0 ? side.continuous / side.discrete : kInfinity;
    }
  };
  fill(rep.area, areaSeq, e.outer, e.inner);
  fill(rep.sup, supSeq, rep.supOuter, kInfinity);
  return rep;
}

ExperimentTable comparabilityExperiment(const std::vector<Symbol>& family, const SpaceParams& params,
                                        const std::vector<ProbeFamily>& probes, const QuadratureConfig& cfg,
                                        bool allowTrivial) {
  params.validate();
  const Triviality t = trivialityCheck(params);
  if (t.trivial && !allowTrivial) {
    throw ParameterError("only constant symbols are bounded here (" + t.clause + "); pass allowTrivial to override");
  }
  ExperimentTable out;
  out.rows.resize(family.size());
  // Each criterion and probe sweep is parallel inside; symbols run in order.
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Symbol& b = family[i];
    ExperimentRow& row = out.rows[i];
    row.symbol = b.describe();
    CriterionReport rep = criterionValue(b, params, cfg);
    row.regime = rep.regime.label;
    row.criterion = rep.criterion.value;
    row.converged = rep.criterion.converged;
    if (!b.isConstant()) {
      attachOpNormLowerBound(rep, b, probes, cfg);
      row.opNormLower = rep.opNormLower->value;
      row.converged = row.converged && rep.opNormLower->converged;
    }
    if (row.criterion > 0.0) row.ratio = row.opNormLower / row.criterion;
  }
  double lo = kInfinity, hi = 0.0;
  for (const auto& row : out.rows) {
    if (row.ratio && *row.ratio > 0.0) {
      lo = std::min(lo, *row.ratio);
      hi = std::max(hi, *row.ratio);
    }
  }
  out.ratioSpread = hi > 0.0 ? hi / lo : 0.0;
  return out;
}

std::string toCsv(const ExperimentTable& table) {
  std::ostringstream os;
  os.precision(12);
  os << "symbol,regime,criterion,opnorm_lower,ratio,converged\n";
  for (const auto& row : table.rows) {
    std::string s = row.symbol;
    if (s.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      s = quoted + "\"";
    }
    os << s << ',' << toString(row.regime) << ',' << row.criterion << ',' << row.opNormLower << ',';
    if (row.ratio) os << *row.ratio;
    os << ',' << (row.converged ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace volterra
