#pragma once

#include "inhibnet/model.hpp"

#include <json.hpp>

#include <filesystem>

namespace inhibnet {

/// Parses a configuration document. Unknown keys anywhere raise ConfigError.
/// Does not run validate(); callers decide how to report invariant violations.
NetworkModel parse_model(const nlohmann::json& doc);

/// Reads and parses a configuration file (ConfigError on I/O or syntax failure).
nlohmann::json read_config_document(const std::filesystem::path& path);

NetworkModel load_model(const std::filesystem::path& path);

nlohmann::json to_json(const NetworkModel& model);

} // namespace inhibnet
