#pragma once

#include <string>

#include <json.hpp>

#include "qadv/adversary.hpp"
#include "qadv/boolean_function.hpp"
#include "qadv/compress.hpp"
#include "qadv/sdp.hpp"
#include "qadv/simulate.hpp"

namespace qadv {

using Json = nlohmann::json;

/// Fixed-format scientific notation, byte-stable across runs.
std::string format_double(double v);

Json to_json(const BooleanFunction& f);
BooleanFunction function_from_json(const Json& j);

/// block_dims, triplet lists for the cost and every constraint, right-hand
/// side vector. Triplets are [block, row, col, value] with row <= col.
Json to_json(const StandardFormSdp& sdp);
StandardFormSdp sdp_from_json(const Json& j);

Json to_json(const SdpSolution& sol);
SdpSolution solution_from_json(const Json& j);

Json to_json(const DecidingVectorSet& vs);
DecidingVectorSet vectors_from_json(const Json& j);

Json to_json(const Certificate& cert);
Certificate certificate_from_json(const Json& j);

/// Dimensions, distortion, seed, and attempt index only; the projection
/// matrix is reproducible from the seed.
Json to_json(const JlProjection& jl);
JlProjection jl_from_json(const Json& j);

/// Witnesses plus the projection record and pipeline parameters. The
/// registered family components are derived data and are not stored;
/// a round-tripped object supports simulation and the distortion checks.
Json to_json(const CompressedWitnesses& cw);
CompressedWitnesses compressed_from_json(const Json& j);

Json to_json(const CompressedChecks& checks);

Json to_json(const SimulationReport& report);

/// Header comment line with the embedded config, then one row per input:
/// x, fx, mass_half, mass_full, lower, upper, verdict.
std::string simulation_csv(const SimulationReport& report, const std::string& config_line);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Json read_json_file(const std::string& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::string& path, const Json& j);

}  // namespace qadv
