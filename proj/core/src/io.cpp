#include "volterra/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace volterra {

namespace {

template <class T>
T field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParameterError(std::string("field '") + key + "' has the wrong type");
  }
}

Json pointJson(const CVec& z) {
  Json p = Json::array({z[0].real(), z[0].imag()});
  if (z.dim() == 2) {
    p.push_back(z[1].real());
    p.push_back(z[1].imag());
  }
  return p;
}

cplx entryOf(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw ParameterError("sequence entries must be numbers or [re, im] pairs");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParameterError("malformed " + what + " '" + s + "'");
  }
  if (used != s.size()) throw ParameterError("malformed " + what + " '" + s + "'");
  return v;
}

int integer(const std::string& s, const std::string& what) {
  const double v = number(s, what);
  if (v != std::floor(v) || v < 1.0 || v > 1e6) throw ParameterError(what + " must be a positive integer");
  return static_cast<int>(v);
}

}  // namespace

Json toJson(const QuadratureConfig& cfg) {
  return {{"radial_nodes", cfg.radialNodes},
          {"angular_nodes", cfg.angularNodes},
          {"max_radius", cfg.maxRadius},
          {"dimension", cfg.dimension}};
}

QuadratureConfig quadratureFromJson(const Json& j) {
  if (!j.is_object()) throw ParameterError("quadrature config must be a JSON object");
  QuadratureConfig c;
  c.radialNodes = field(j, "radial_nodes", c.radialNodes);
  c.angularNodes = field(j, "angular_nodes", c.angularNodes);
  c.maxRadius = field(j, "max_radius", c.maxRadius);
  c.dimension = field(j, "dimension", c.dimension);
  c.validate();
  return c;
}

Json toJson(const SpaceParams& params) {
  return {{"n", params.n},
          {"p", params.p},
          {"q", params.q},
          {"alpha", params.alpha},
          {"aperture", params.aperture.value()}};
}

SpaceParams paramsFromJson(const Json& j) {
  if (!j.is_object()) throw ParameterError("params must be a JSON object");
  SpaceParams s;
  s.n = field(j, "n", s.n);
  s.p = field(j, "p", s.p);
  s.q = field(j, "q", s.q);
  s.alpha = field(j, "alpha", s.alpha);
  s.aperture = Aperture(field(j, "aperture", s.aperture.value()));
  s.validate();
  return s;
}

Json toJson(const ResolutionTag& tag) {
  return {{"radial_nodes", tag.radialNodes},
          {"angular_nodes", tag.angularNodes},
          {"max_radius", tag.maxRadius},
          {"dimension", tag.dimension},
          {"method", tag.method}};
}

Json toJson(const NormResult& r) {
  Json j = {{"value", r.value}, {"converged", r.converged}, {"trace", r.trace}, {"excluded_nodes", r.excludedNodes}};
  if (r.root) j["root"] = *r.root;
  return j;
}

Json toJson(const Regime& r) {
  Json j = {{"label", toString(r.label)}};
  j["gamma_exp"] = r.gammaExp ? Json(*r.gammaExp) : Json(nullptr);
  j["rule"] = r.boundaryRule;
  return j;
}

Json toJson(const OpNormBound& b) {
  Json rows = Json::array();
  for (const auto& row : b.rows) {
    rows.push_back({{"probe", row.label},
                    {"hardy", row.hardy},
                    {"bergman", row.bergman},
                    {"ratio", row.ratio},
                    {"converged", row.converged}});
  }
  return {{"value", b.value}, {"best_probe", b.bestProbe}, {"converged", b.converged}, {"rows", rows}};
}

Json toJson(const CriterionReport& r) {
  Json j;
  j["regime"] = toJson(r.regime);
  j["criterion"] = toJson(r.criterion);
  j["opnorm_lower"] = r.opNormLower ? toJson(*r.opNormLower) : Json(nullptr);
  j["triviality"] = {{"trivial", r.triviality.trivial}, {"clause", r.triviality.clause}};
  j["params"] = toJson(r.params);
  j["resolution"] = toJson(r.resolution);
  return j;
}

Json toJson(const HardyBergmanReport& r) {
  Json j;
  j["case"] = toString(r.kase);
  j["gamma_exp"] = r.gammaExp ? Json(*r.gammaExp) : Json(nullptr);
  j["criterion"] = toJson(r.criterion);
  j["params"] = toJson(r.params);
  j["resolution"] = toJson(r.criterion.resolution);
  return j;
}

Json toJson(const DiscretizationReport& r) {
  auto side = [](const DiscretizationSide& s) {
    return Json{{"continuous", s.continuous},
                {"discrete", s.discrete},
                {"discrete_aperture4", s.discreteWide4},
                {"discrete_aperture8", s.discreteWide8},
                {"ratio", s.ratio},
                {"exact_zero", s.exactZero}};
  };
  return {{"r", r.r},
          {"rmax", r.rmax},
          {"lattice_size", r.latticeSize},
          {"lattice_valid", r.latticeValid},
          {"area_exponents", {{"outer", r.areaExponents.outer},
                              {"inner", r.areaExponents.inner},
                              {"beta", r.areaExponents.beta}}},
          {"area", side(r.area)},
          {"sup_outer", r.supOuter},
          {"sup", side(r.sup)}};
}

Json toJson(const SweepTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"radius", r.radius}, {"lhs", r.lhs}, {"majorant", r.majorant}, {"ratio", r.ratio}});
  }
  const auto& e = t.exponents;
  return {{"lemma", toString(t.lemma)},
          {"exponents", {{"n", e.n}, {"s", e.s}, {"t", e.t}, {"r", e.r}, {"theta", e.theta},
                         {"lattice_r", e.latticeR}, {"aperture", e.aperture.value()}}},
          {"max_ratio", t.maxRatio},
          {"monotone_divergence", t.monotoneDivergence},
          {"rows", rows}};
}

Json toJson(const Lattice& Z) {
  Json pts = Json::array();
  for (const auto& a : Z.points) pts.push_back(pointJson(a.coords()));
  const auto& c = Z.certificate;
  return {{"r", Z.r},
          {"rmax", Z.rmax},
          {"n", Z.n},
          {"points", pts},
          {"certificate", {{"valid", c.valid()},
                           {"min_pairwise_distance", c.minPairwiseBergmanDist},
                           {"separation", c.separationVerified},
                           {"covering", c.coveringVerified},
                           {"covering_radius", c.coveringRadius},
                           {"multiplicity_bound", c.multiplicityBound},
                           {"observed_multiplicity", c.observedMultiplicity},
                           {"test_points", c.testPoints}}}};
}

Lattice latticeFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
    throw ParameterError("lattice JSON needs a 'points' array");
  }
  Lattice Z;
  Z.r = field(j, "r", 0.0);
  Z.rmax = field(j, "rmax", 0.0);
  Z.n = field(j, "n", 1);
  if (Z.n != 1) throw DomainError("lattice tooling is implemented for n = 1");
  if (!(Z.r > 0.0 && Z.r <= 0.5)) throw ParameterError("lattice parameter r must lie in (0, 0.5]");
  for (const auto& p : j["points"]) Z.points.emplace_back(CVec(entryOf(p)));
  if (Z.points.empty()) throw ParameterError("lattice has no points");
  if (!(Z.rmax > 0.0 && Z.rmax < 1.0)) {
    for (const auto& a : Z.points) Z.rmax = std::max(Z.rmax, a.norm());
  }
  Z.certificate = verifyLattice(Z, latticeTestGrid(Z));
  return Z;
}

Json toJson(const TentSequence& s) {
  Json a = Json::array();
  for (const auto& v : s) a.push_back({v.real(), v.imag()});
  return a;
}

TentSequence sequenceFromJson(const Json& j) {
  const Json& arr = j.is_object() && j.contains("values") ? j["values"] : j;
  if (!arr.is_array()) throw ParameterError("sequence JSON must be an array (or an object with 'values')");
  TentSequence s;
  for (const auto& e : arr) s.push_back(entryOf(e));
  return s;
}

Json toJson(const Factorization& f) {
  return {{"lambda_norm", f.lambdaNorm},
          {"alpha_norm", f.alphaNorm},
          {"beta_norm", f.betaNorm},
          {"ratio", f.ratio},
          {"max_reconstruction_error", f.maxReconstructionError},
          {"alpha", toJson(f.alpha)},
          {"beta", toJson(f.beta)}};
}

std::vector<ProbeFamily> parseProbeSpec(const std::string& spec, std::uint64_t seed) {
  std::vector<ProbeFamily> out;
  for (const auto& item : split(spec, ';')) {
    if (item.empty()) continue;
    const auto parts = split(item, ':');
    const std::string& name = parts[0];
    if (name == "monomials") {
      if (parts.size() > 2) throw ParameterError("monomials takes at most one argument");
      Monomials m;
      if (parts.size() == 2) m.maxDegree = integer(parts[1], "monomial degree");
      out.emplace_back(m);
    } else if (name == "kernels") {
      if (parts.size() > 2) throw ParameterError("kernels takes at most one argument");
      NecessityKernels k;
      if (parts.size() == 2) {
        k.s = number(parts[1], "kernel exponent");
        if (!(k.s > 0.0)) throw ParameterError("kernel exponent must be positive");
      }
      out.emplace_back(k);
    } else if (name == "random") {
      if (parts.size() > 3) throw ParameterError("random takes at most two arguments");
      RandomPolynomials r;
      r.seed = seed;
      if (parts.size() >= 2) r.count = integer(parts[1], "random probe count");
      if (parts.size() == 3) r.degree = integer(parts[2], "random probe degree");
      out.emplace_back(r);
    } else if (name == "atoms") {
      if (parts.size() > 3) throw ParameterError("atoms takes at most two arguments");
      Atoms a;
      a.seed = seed;
      if (parts.size() >= 2) a.count = integer(parts[1], "atom probe count");
      if (parts.size() == 3) a.sparsity = integer(parts[2], "atom sparsity");
      a.lattice = buildLattice(0.5, 0.95, 1);
      out.emplace_back(std::move(a));
    } else {
      throw ParameterError("unknown probe family '" + name + "'");
    }
  }
  if (out.empty()) throw ParameterError("probe spec is empty");
  return out;
}

ExperimentConfig experimentConfigFromJson(const Json& j) {
  if (!j.is_object()) throw ParameterError("experiment config must be a JSON object");
  ExperimentConfig c;
  if (!j.contains("symbols") || !j["symbols"].is_array() || j["symbols"].empty()) {
    throw ParameterError("experiment config needs a nonempty 'symbols' array");
  }
  for (const auto& s : j["symbols"]) {
    if (!s.is_string()) throw ParameterError("symbol entries must be strings");
    c.symbols.push_back(s.get<std::string>());
  }
  if (j.contains("params")) c.params = paramsFromJson(j["params"]);
  c.cfg.dimension = c.params.n;
  if (j.contains("quadrature")) {
    Json q = j["quadrature"];
    if (!q.contains("dimension")) q["dimension"] = c.params.n;
    c.cfg = quadratureFromJson(q);
  }
  c.probes = field(j, "probes", c.probes);
  c.seed = field<std::uint64_t>(j, "seed", c.seed);
  c.allowTrivial = field(j, "allow_trivial", c.allowTrivial);
  return c;
}

Json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("malformed JSON in '" + path + "': " + e.what());
  }
}

void writeFileAtomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParameterError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw ParameterError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ParameterError("cannot move output into '" + path + "': " + ec.message());
  }
}

}  // namespace volterra
