#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "cble/classify.hpp"
#include "cble/lyapunov.hpp"
#include "cble/model.hpp"
#include "cble/montecarlo.hpp"
#include "cble/simulate.hpp"

namespace cble::io {

inline constexpr const char* kSchemaHeader = "# cble-lab schema v1";

/// Deterministic shortest-faithful formatting ("%.17g") for CSV output.
std::string format_double(double v);

// CSV emitters; every file starts with the schema comment line.
void write_path_csv(const PathRecord& rec, std::ostream& os);
void write_phase_csv(const PhaseDiagram& d, std::ostream& os);

// JSON emitters (pretty, 2 spaces).
std::string to_json(const ModelSpec& m);
std::string to_json(const SimConfig& c);
std::string to_json(const PathRecord& rec);
std::string to_json(const MCResult& r);
std::string to_json(const RegimeVerdict& v);
std::string to_json(const ExplosionCertificate& c);
std::string to_json(const std::optional<ExplosionCertificate>& c);
std::string to_json(const NonexplosionEvidence& e);
std::string to_json(const std::optional<NonexplosionEvidence>& e);
std::string to_json(const PhaseDiagram& d);

// Round-trip parsers for the emitted JSON (throw ConfigError on malformed
// input, ValidationError when the parsed object breaks its invariants).
ModelSpec model_from_json(const std::string& text);
SimConfig sim_config_from_json(const std::string& text);
PathRecord path_record_from_json(const std::string& text);
MCResult mc_result_from_json(const std::string& text);
ExplosionCertificate certificate_from_json(const std::string& text);
NonexplosionEvidence evidence_from_json(const std::string& text);

}  // namespace cble::io
