#pragma once

#include "magneto/dataset.hpp"
#include "magneto/oracle.hpp"

#include <json.hpp>
#include <string>

// JSON bindings for the run configs. Parsing is strict: unknown keys are
// rejected so frozen experiment configs stay unambiguous.

namespace magneto {

nlohmann::json oracle_config_to_json(const OracleConfig& cfg);
OracleConfig oracle_config_from_json(const nlohmann::json& j, int sample_rate);

nlohmann::json manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

} // namespace magneto
