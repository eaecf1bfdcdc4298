#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "volterra/criteria.hpp"
#include "volterra/lattice.hpp"
#include "volterra/operator.hpp"
#include "volterra/sweeps.hpp"

namespace volterra {

using Json = nlohmann::ordered_json;

/// {radial_nodes, angular_nodes, max_radius, dimension}. Missing fields keep defaults;
/// the result is validated.
Json toJson(const QuadratureConfig& cfg);
QuadratureConfig quadratureFromJson(const Json& j);

/// {n, p, q, alpha, aperture}.
Json toJson(const SpaceParams& params);
SpaceParams paramsFromJson(const Json& j);

Json toJson(const ResolutionTag& tag);
/// {value, converged, trace, excluded_nodes[, root]}.
Json toJson(const NormResult& r);
Json toJson(const Regime& r);
Json toJson(const OpNormBound& b);
/// {regime, criterion:{value, converged}, opnorm_lower, triviality, params, resolution}.
Json toJson(const CriterionReport& r);
Json toJson(const HardyBergmanReport& r);
Json toJson(const DiscretizationReport& r);
Json toJson(const SweepTable& t);

/// {r, rmax, n, points:[[re, im], ...], certificate}.
Json toJson(const Lattice& Z);
/// Reads points, r, rmax and n and re-verifies the certificate on the default test grid.
Lattice latticeFromJson(const Json& j);

/// [[re, im], ...]; plain numbers are accepted as real entries when reading.
Json toJson(const TentSequence& s);
TentSequence sequenceFromJson(const Json& j);
Json toJson(const Factorization& f);

/// Semicolon-separated probe families: monomials[:maxDegree], kernels[:s],
/// random[:count[:degree]], atoms[:count[:sparsity]]. Random and atom families use seed.
std::vector<ProbeFamily> parseProbeSpec(const std::string& spec, std::uint64_t seed);

/// Input of the verify command:
/// {symbols:[spec, ...], params:{...}, quadrature:{...}, probes:"...", seed, allow_trivial}.
struct ExperimentConfig {
  std::vector<std::string> symbols;
  SpaceParams params;
  QuadratureConfig cfg;
  std::string probes = "monomials:8;kernels";
  std::uint64_t seed = 1;
  bool allowTrivial = false;
};
ExperimentConfig experimentConfigFromJson(const Json& j);

/// Reads and parses a JSON file. Throws ParameterError when unreadable or malformed.
Json readJsonFile(const std::string& path);
/// Writes to path via a temporary file and rename.
void writeFileAtomic(const std::string& path, const std::string& content);

}  // namespace volterra
