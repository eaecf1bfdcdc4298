#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "volterra/io.hpp"
#include "volterra/parallel.hpp"
#include "volterra/selftest.hpp"

using namespace volterra;

namespace {

constexpr int kOk = 0;
constexpr int kSelftestFailed = 1;
constexpr int kUsage = 2;
constexpr int kNotConverged = 3;
constexpr int kInternal = 4;

struct Globals {
  int n = 1;
  double p = 2.0;
  double q = 2.0;
  double alpha = 0.0;
  double aperture = 2.0;
  int radialNodes = QuadratureConfig{}.radialNodes;
  int angularNodes = QuadratureConfig{}.angularNodes;
  double maxRadius = QuadratureConfig{}.maxRadius;
  std::uint64_t seed = 1;
  int threads = 0;
  bool strict = false;
  std::string out;

  SpaceParams params() const {
    SpaceParams s;
    s.n = n;
    s.p = p;
    s.q = q;
    s.alpha = alpha;
    s.aperture = Aperture(aperture);
    s.validate();
    return s;
  }
  QuadratureConfig quadrature() const {
    QuadratureConfig c;
    c.radialNodes = radialNodes;
    c.angularNodes = angularNodes;
    c.maxRadius = maxRadius;
    c.dimension = n;
    c.validate();
    return c;
  }
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    writeFileAtomic(g.out, text);
  }
}

void emit(const Globals& g, const Json& j) { emit(g, j.dump(2) + "\n"); }

int finish(const Globals& g, bool converged) {
  if (g.strict && !converged) {
    std::cerr << "error: result did not converge (--strict)\n";
    return kNotConverged;
  }
  return kOk;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volterra-type integration operators from Bergman to Hardy spaces"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--n", g.n, "Complex dimension (1 or 2)");
  app.add_option("--p", g.p, "Bergman exponent p");
  app.add_option("--q", g.q, "Hardy exponent q");
  app.add_option("--alpha", g.alpha, "Bergman weight alpha > -1");
  app.add_option("--aperture", g.aperture, "Koranyi aperture > 1");
  app.add_option("--radial-nodes", g.radialNodes, "Radial quadrature nodes");
  app.add_option("--angular-nodes", g.angularNodes, "Angular quadrature nodes");
  app.add_option("--max-radius", g.maxRadius, "Outermost quadrature radius");
  app.add_option("--seed", g.seed, "Seed for random probes and grids");
  app.add_option("--threads", g.threads, "Worker thread cap (0 = all cores)");
  app.add_flag("--strict", g.strict, "Exit 3 when a reported value did not converge");
  app.add_option("--out", g.out, "Write output here instead of stdout");

  auto* classify = app.add_subcommand("classify", "Regime and triviality of (p, q, alpha, n)");
  bool classifyJson = false;
  classify->add_flag("--json", classifyJson, "Print JSON instead of text");

  auto* criterion = app.add_subcommand("criterion", "Criterion quantity for a symbol");
  std::string symbol;
  std::string target = "hardy";
  bool withOpnorm = false;
  std::string probes = "monomials:8;kernels";
  criterion->add_option("--symbol", symbol, "Symbol spec, e.g. poly:0,1 or log:a=1")->required();
  criterion->add_option("--target", target, "hardy (J_b: A^p -> H^q) or bergman (J_b: H^p -> A^q)")
      ->check(CLI::IsMember({"hardy", "bergman"}));
  criterion->add_flag("--opnorm", withOpnorm, "Attach a probe lower bound for the operator norm");
  criterion->add_option("--probes", probes, "Probe families for --opnorm");

  auto* opnorm = app.add_subcommand("opnorm", "Lower bound for the operator norm by probing");
  opnorm->add_option("--symbol", symbol, "Symbol spec")->required();
  opnorm->add_option("--probes", probes, "monomials[:deg];kernels[:s];random[:count[:deg]];atoms[:count[:k]]");

  auto* verify = app.add_subcommand("verify", "Run a comparability experiment from a JSON config, print CSV");
  std::string configFile;
  verify->add_option("config", configFile, "Experiment config file")->required();

  auto* lattice = app.add_subcommand("lattice", "Build and certify a separated lattice");
  double latticeR = 0.5;
  double latticeRmax = 0.95;
  lattice->add_option("--r", latticeR, "Separation radius in (0, 0.5]");
  lattice->add_option("--rmax", latticeRmax, "Truncation radius");

  auto* factorize = app.add_subcommand("factorize", "Factor a tent sequence over a lattice");
  std::string latticeFile;
  std::string sequenceFile;
  double s = 1.0;
  factorize->add_option("--lattice", latticeFile, "Lattice JSON from the lattice command")->required();
  factorize->add_option("--sequence", sequenceFile, "Sequence JSON")->required();
  factorize->add_option("--s", s, "Averaging exponent, 0 < s < p");

  auto* selftest = app.add_subcommand("selftest", "Run the invariant suite");
  std::string level = "fast";
  selftest->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (g.threads < 0) throw ParameterError("--threads must be non-negative");
    setMaxThreads(g.threads);

    if (classify->parsed()) {
      const SpaceParams sp = g.params();
      const Regime r = classifyRegime(sp);
      const Triviality t = trivialityCheck(sp);
      if (classifyJson) {
        Json j;
        j["regime"] = toJson(r);
        j["triviality"] = {{"trivial", t.trivial}, {"clause", t.clause}};
        j["params"] = toJson(sp);
        emit(g, j);
      } else {
        std::string text = "regime: " + toString(r.label) + "\n";
        if (r.gammaExp) text += "gamma: " + fmt(*r.gammaExp) + "\n";
        if (!r.boundaryRule.empty()) text += "rule: " + r.boundaryRule + "\n";
        text += std::string("trivial: ") + (t.trivial ? "yes" : "no") + " (" + t.clause + ")\n";
        emit(g, text);
      }
      return kOk;
    }

    if (criterion->parsed()) {
      const SpaceParams sp = g.params();
      const QuadratureConfig cfg = g.quadrature();
      const Symbol b = parseSymbol(symbol, sp.n);
      const auto probeSet = withOpnorm ? parseProbeSpec(probes, g.seed) : std::vector<ProbeFamily>{};
      if (target == "bergman") {
        const HardyBergmanReport r = hardyToBergmanCriterion(b, sp, cfg);
        emit(g, toJson(r));
        return finish(g, r.criterion.converged);
      }
      CriterionReport r = criterionValue(b, sp, cfg);
      if (withOpnorm) attachOpNormLowerBound(r, b, probeSet, cfg);
      emit(g, toJson(r));
      return finish(g, r.criterion.converged && (!r.opNormLower || r.opNormLower->converged));
    }

    if (opnorm->parsed()) {
      const SpaceParams sp = g.params();
      const QuadratureConfig cfg = g.quadrature();
      const Symbol b = parseSymbol(symbol, sp.n);
      const auto probeSet = parseProbeSpec(probes, g.seed);
      const OpNormBound r = opNormLowerBound(b, sp, probeSet, cfg);
      Json j = toJson(r);
      j["params"] = toJson(sp);
      j["symbol"] = b.describe();
      emit(g, j);
      return finish(g, r.converged);
    }

    if (verify->parsed()) {
      const ExperimentConfig ec = experimentConfigFromJson(readJsonFile(configFile));
      std::vector<Symbol> family;
      for (const auto& spec : ec.symbols) family.push_back(parseSymbol(spec, ec.params.n));
      const auto probeSet = parseProbeSpec(ec.probes, ec.seed);
      const ExperimentTable t = comparabilityExperiment(family, ec.params, probeSet, ec.cfg, ec.allowTrivial);
      emit(g, toCsv(t));
      bool converged = true;
      for (const auto& row : t.rows) converged = converged && row.converged;
      return finish(g, converged);
    }

    if (lattice->parsed()) {
      if (g.n != 1) throw DomainError("lattice tooling is implemented for n = 1");
      const Lattice Z = buildLattice(latticeR, latticeRmax, g.n);
      emit(g, toJson(Z));
      return Z.certificate.valid() ? kOk : finish(g, false);
    }

    if (factorize->parsed()) {
      const SpaceParams sp = g.params();
      const Lattice Z = latticeFromJson(readJsonFile(latticeFile));
      const TentSequence lam = sequenceFromJson(readJsonFile(sequenceFile));
      if (lam.size() != Z.size()) {
        throw ParameterError("sequence has " + std::to_string(lam.size()) + " entries but the lattice has " +
                             std::to_string(Z.size()) + " points");
      }
      const Factorization f = factorizeTentSeq(lam, Z, sp.p, sp.q, s, sp);
      emit(g, toJson(f));
      return kOk;
    }

    if (selftest->parsed()) {
      const SelftestReport r = runSelftest(selftestLevelFromString(level), [](const SelftestCheck& c) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << fmt(c.seconds) << " s)";
        if (!c.passed) std::cout << ": " << c.detail;
        std::cout << std::endl;
      });
      std::cout << (r.passed() ? "selftest passed" : "selftest FAILED") << " in " << fmt(r.seconds) << " s\n";
      return r.passed() ? kOk : kSelftestFailed;
    }
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
