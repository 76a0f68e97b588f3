#pragma once

#include <string>

#include <json.hpp>

#include "tdsmc/analysis.hpp"

namespace tdsmc {

nlohmann::json to_json(const CertificationReport& report);
nlohmann::json to_json(const TraceAudit& audit);

/// Writes `doc` pretty-printed; throws IoError on failure.
void write_json(const nlohmann::json& doc, const std::string& path);

}  // namespace tdsmc
