#pragma once

#include <string>

#include <json.hpp>

#include "elight/write.hpp"

namespace elight {

/// Deterministic serialization: keys sorted (nlohmann objects already are),
/// floats printed with 17 significant digits so doubles round-trip, 2-space
/// indentation. Byte-identical for equal documents on every run.
std::string canonical_json(const nlohmann::json& doc);

nlohmann::json stats_to_json(const WriteStats& stats);

/// layer,total_writes,max_writes,writes_a_to_c,writes_c_to_a,energy_units
/// rows for every layer plus a final `total` row, numbers formatted exactly
/// as in the JSON report.
std::string report_to_csv(const nlohmann::json& report);

}  // namespace elight
