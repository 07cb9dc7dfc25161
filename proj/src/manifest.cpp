#include "inhibnet/manifest.hpp"

#include "inhibnet/io.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace inhibnet {

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int k = 0; k < len; ++k) {
        out += hex[md[k] >> 4];
        out += hex[md[k] & 0xf];
    }
    return out;
}

std::string config_hash(const nlohmann::json& doc) { return sha256_hex(doc.dump()); }

nlohmann::json RunManifest::to_json() const {
    return {{"command", command}, {"config_hash", config_hash}, {"seed", seed}, {"version", version},
            {"outputs", outputs}};
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    write_atomic(path, manifest.to_json().dump(2) + "\n");
}

} // namespace inhibnet
