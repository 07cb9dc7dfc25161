#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace inhibnet {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// Digest of the canonical (key-sorted, compact) serialization of a JSON document.
std::string config_hash(const nlohmann::json& doc);

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<std::string> outputs;

    nlohmann::json to_json() const;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

} // namespace inhibnet
