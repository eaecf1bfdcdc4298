#include "volterra/selftest.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "volterra/carleson.hpp"
#include "volterra/criteria.hpp"
#include "volterra/lattice.hpp"
#include "volterra/norms.hpp"
#include "volterra/operator.hpp"
#include "volterra/sweeps.hpp"

namespace volterra {

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << what << "; ";
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      ok = false;
      detail << what << ": got " << got << ", want " << want << " +- " << tol << "; ";
    }
  }
};

Symbol randomPoly(std::mt19937_64& rng, int degree) {
  std::normal_distribution<double> N;
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1);
  for (auto& v : c) v = {N(rng), N(rng)};
  return Symbol::polynomial(c);
}

std::vector<cplx> coefficientsOf(const Symbol& s) { return *s.exactCoefficients(); }

QuadratureConfig defaultCfg(int n = 1) {
  QuadratureConfig c;
  c.dimension = n;
  return c;
}

void checkIdentity(Outcome& o, int pairs) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> deg(1, 5);
  const QuadratureConfig cfg = defaultCfg();
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Symbol b = randomPoly(rng, deg(rng));
    const Symbol f = randomPoly(rng, deg(rng));
    worst = std::max(worst, radialIdentityResidual(b, f, cfg));
  }
  o.expect(worst < 1e-6, "max |R(J_b f) - f Rb| = " + std::to_string(worst));
}

void checkJbOne(Outcome& o) {
  const Symbol one = Symbol::constant(1, 1.0);
  const std::vector<Symbol> family{Symbol::polynomial({0.3, cplx(1.0, -2.0), 0.5, cplx(0.0, 0.25)}),
                                   Symbol::kernel(BallPoint(cplx(0.6, 0.2)), 1.5),
                                   Symbol::logKernel(CVec(cplx(0.0, 0.95)))};
  double worst = 0.0;
  for (const auto& b : family) {
    const CVec zero = CVec::zero(1);
    for (int i = 0; i < 50; ++i) {
      const CVec z(std::polar(0.02 * (i % 10) * 4.5, 0.7 * i));
      worst = std::max(worst, std::abs(applyJb(b, one, z) - (b(z) - b(zero))));
    }
  }
  o.expect(worst < 1e-6, "max |J_b 1 - (b - b(0))| = " + std::to_string(worst));
}

void checkNormOracles(Outcome& o, int polys, int maxM) {
  const QuadratureConfig cfg = defaultCfg();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> deg(0, 20);
  for (int k = 0; k < polys; ++k) {
    const Symbol f = randomPoly(rng, deg(rng));
    double s = 0.0;
    for (const auto& c : coefficientsOf(f)) s += std::norm(c);
    o.near(hardyNorm(f, 2.0, cfg).value, std::sqrt(s), 1e-6 * std::max(1.0, std::sqrt(s)), "H^2 norm");
  }
  for (int m = 0; m <= 6; ++m) {
    for (double p : {1.0, 2.0, 3.0}) {
      for (double a : {0.0, 1.0}) {
        const double want =
            std::pow((a + 1.0) * std::exp(std::lgamma(m * p / 2 + 1) + std::lgamma(a + 1) - std::lgamma(m * p / 2 + a + 2)),
                     1.0 / p);
        o.near(bergmanNorm(Symbol::monomial(MultiIndex(m)), p, a, cfg).value, want, 1e-8, "Bergman z^m");
      }
    }
  }
  for (int m = 1; m <= maxM; ++m) {
    const double want = static_cast<double>(m * m) / ((m + 1.0) * (m + 2.0));
    o.near(hardySteinFunctional(Symbol::monomial(MultiIndex(m)), 2.0, cfg).value, want, 1e-8, "Hardy-Stein z^m");
  }
}

void checkBloch(Outcome& o) {
  const QuadratureConfig cfg = defaultCfg();
  const NormResult lg = blochSeminorm(Symbol::logKernel(CVec::unit(1)), 1.0, cfg);
  o.near(lg.value, 2.0, 1e-4, "Bloch seminorm of log 1/(1-z)");
  const NormResult z = blochSeminorm(Symbol::monomial(MultiIndex(1)), 1.0, cfg);
  o.near(z.value, 2.0 / (3.0 * std::sqrt(3.0)), 1e-5, "Bloch seminorm of z");
}

void checkRegimes(Outcome& o, int grid) {
  int counts[4] = {0, 0, 0, 0};
  for (int i = 1; i <= grid; ++i) {
    for (int j = 1; j <= grid; ++j) {
      const double p = 6.0 * i / grid, q = 6.0 * j / grid;
      const RegimeLabel got = classifyRegime(p, q).label;
      int hits = 0;
      hits += (p <= std::min(2.0, q) || (2.0 < p && p < q)) ? 1 : 0;
      hits += (p > 2.0 && p == q) ? 1 : 0;
      hits += (p > std::max(2.0, q)) ? 1 : 0;
      hits += (q < p && p <= 2.0) ? 1 : 0;
      o.expect(hits == 1, "regime conditions overlap or miss");
      ++counts[static_cast<int>(got)];
    }
  }
  o.expect(counts[0] && counts[1] && counts[2] && counts[3], "a regime never occurs on the grid");
  o.expect(classifyRegime(1.5, 1.5).label == RegimeLabel::Item1, "p = q <= 2 belongs to Item1");
  o.expect(classifyRegime(2.0, 1.0).label == RegimeLabel::Item4, "p = 2 > q belongs to Item4");
  o.expect(classifyRegime(3.0, 3.0).label == RegimeLabel::Item2, "2 < p = q is Item2");
}

void checkTriviality(Outcome& o) {
  SpaceParams s;
  s.p = 1;
  s.q = 1;
  s.alpha = 0.5;
  o.expect(trivialityCheck(s).trivial, "(1,1,0.5) is trivial");
  s.p = 2;
  s.alpha = 0.0;
  o.expect(!trivialityCheck(s).trivial, "(2,1,0) is not trivial");
  s.p = 1;
  s.q = 2;
  o.expect(trivialityCheck(s).trivial, "(1,2,0) is trivial");
}

void checkLattice(Outcome& o, double r, double rmax) {
  const Lattice Z = buildLattice(r, rmax, 1);
  o.expect(Z.certificate.valid(), "lattice certificate failed");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<CVec> pts;
  for (int k = 0; k < 2000; ++k) pts.emplace_back(std::polar(rmax * std::sqrt(U(rng)), 2.0 * std::numbers::pi * U(rng)));
  o.expect(verifyLattice(Z, pts).valid(), "lattice fails on random test points");
}

void checkFactorization(Outcome& o) {
  const Lattice Z = latticePrefix(buildLattice(0.5, 0.95, 1), 50);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N;
  TentSequence lam(Z.size());
  for (auto& v : lam) v = {N(rng), N(rng)};
  const Factorization f = factorizeTentSeq(lam, Z, 2.0, 1.0, 1.0, SpaceParams{});
  o.expect(f.maxReconstructionError < 1e-12, "alpha beta != lambda");
  o.expect(std::isfinite(f.ratio) && f.ratio > 0.0, "factorization ratio not finite");
}

void checkCarlesonUnitMass(Outcome& o) {
  const MeasureSpec mu = MeasureSpec::atomic({BallPoint(CVec::zero(1))}, {1.0});
  const CarlesonReport r = carlesonReport(mu, 1.0, defaultCfg());
  o.near(r.sConstantKernel, 1.0, 1e-12, "kernel constant of delta_0");
  o.near(r.sConstantBox, 1.0, 1e-8, "box constant of delta_0");
}

void checkSweeps(Outcome& o, bool full) {
  const QuadratureConfig cfg = defaultCfg();
  LemmaExponents e;
  e.s = 1.0;
  const SweepTable t = kernelEstimateSweep(KernelLemma::IctBnSphere, e, cfg, {0.0});
  o.near(t.rows[0].ratio, 1.0, 1e-10, "IctBn-sphere ratio at z = 0");
  if (!full) return;
  std::vector<std::pair<KernelLemma, LemmaExponents>> sets;
  LemmaExponents a;
  a.t = 0.0;
  a.s = 1.0;
  sets.emplace_back(KernelLemma::IctBnBall, a);
  LemmaExponents fr;
  fr.s = 1.0;
  fr.r = 2.5;
  fr.t = 2.0;
  sets.emplace_back(KernelLemma::FRGeneral, fr);
  LemmaExponents l2;
  l2.t = 2.0;
  l2.s = 3.0;
  sets.emplace_back(KernelLemma::DiscreteL2, l2);
  LemmaExponents g;
  g.theta = 2.0;
  g.s = 1.0;
  sets.emplace_back(KernelLemma::GammaLemma, g);
  for (const auto& [lemma, ex] : sets) {
    const SweepTable s = kernelEstimateSweep(lemma, ex, cfg);
    o.expect(!s.monotoneDivergence, toString(lemma) + " ratios diverge");
  }
}

void checkHomogeneity(Outcome& o, bool full) {
  const Symbol b = Symbol::polynomial({0.0, 1.0, 0.5});
  const Symbol b2 = b * cplx(2.0);
  std::vector<std::pair<double, double>> pq{{1.0, 2.0}, {2.0, 1.0}};
  if (full) {
    pq.emplace_back(4.0, 4.0);
    pq.emplace_back(4.0, 2.0);
  }
  for (const auto& [p, q] : pq) {
    SpaceParams s;
    s.p = p;
    s.q = q;
    const double c1 = criterionValue(b, s, defaultCfg()).criterion.value;
    const double c2 = criterionValue(b2, s, defaultCfg()).criterion.value;
    o.near(c2, 2.0 * c1, 1e-6 * std::max(1.0, c1), "criterion(2b) = 2 criterion(b) at p = " + std::to_string(p));
  }
  o.near(criterionValue(Symbol::constant(1, 3.0), SpaceParams{}, defaultCfg()).criterion.value, 0.0, 0.0,
         "constant symbol criterion");
}

void checkTrivialityGrowth(Outcome& o) {
  SpaceParams s;
  s.p = 1;
  s.q = 1;
  s.alpha = 0.5;
  const Symbol z = Symbol::monomial(MultiIndex(1));
  double prev = 0.0;
  for (double m : {0.99, 0.995, 0.999}) {
    const CriterionReport r = criterionValue(z, s, defaultCfg().withMaxRadius(m));
    o.expect(r.criterion.value > prev, "criterion not increasing with maxRadius");
    o.expect(!r.criterion.converged, "divergent criterion reported as converged");
    prev = r.criterion.value;
  }
}

void checkHardyBergman(Outcome& o) {
  SpaceParams s;
  s.p = 1;
  s.q = 2;
  const HardyBergmanReport r = hardyToBergmanCriterion(Symbol::logKernel(CVec::unit(1)), s, defaultCfg());
  o.near(r.criterion.value, 2.0, 1e-4, "Hardy->Bergman case (ii) for log 1/(1-z)");
}

void checkCarlesonVolume(Outcome& o) {
  const MeasureSpec v = MeasureSpec::volume(1);
  const QuadratureConfig cfg = defaultCfg();
  o.expect(carlesonReport(v, 2.0, cfg).converged, "volume measure should be 2-Carleson");
  o.expect(!carlesonReport(v, 3.0, cfg).converged, "volume measure is not 3-Carleson");
}

}  // namespace

SelftestLevel selftestLevelFromString(const std::string& name) {
  if (name == "fast") return SelftestLevel::Fast;
  if (name == "full") return SelftestLevel::Full;
  throw ParameterError("selftest level must be 'fast' or 'full'");
}

bool SelftestReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

SelftestReport runSelftest(SelftestLevel level, const std::function<void(const SelftestCheck&)>& onCheck) {
  const bool full = level == SelftestLevel::Full;
  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> suite{
      {"radial identity", [&](Outcome& o) { checkIdentity(o, full ? 20 : 5); }},
      {"J_b 1 = b - b(0)", checkJbOne},
      {"norm oracles", [&](Outcome& o) { checkNormOracles(o, full ? 30 : 5, full ? 20 : 5); }},
      {"Bloch oracles", checkBloch},
      {"regime partition", [&](Outcome& o) { checkRegimes(o, full ? 200 : 50); }},
      {"triviality", checkTriviality},
      {"lattice certificate", [&](Outcome& o) { full ? checkLattice(o, 0.2, 0.99) : checkLattice(o, 0.5, 0.95); }},
      {"factorization", checkFactorization},
      {"Carleson unit mass", checkCarlesonUnitMass},
      {"kernel estimate sweeps", [&](Outcome& o) { checkSweeps(o, full); }},
      {"criterion homogeneity", [&](Outcome& o) { checkHomogeneity(o, full); }},
  };
  if (full) {
    suite.emplace_back("triviality growth", checkTrivialityGrowth);
    suite.emplace_back("Hardy to Bergman", checkHardyBergman);
    suite.emplace_back("Carleson volume measure", checkCarlesonVolume);
  }
  SelftestReport report;
  const auto start = std::chrono::steady_clock::now();
  for (auto& [name, fn] : suite) {
    SelftestCheck c;
    c.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Outcome o;
      fn(o);
      c.passed = o.ok;
      c.detail = o.detail.str();
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (onCheck) onCheck(c);
    report.checks.push_back(std::move(c));
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace volterra
