#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

namespace smactr {

using json = nlohmann::json;

/// Canonical byte form used for hashing: keys sorted, no insignificant
/// whitespace, UTF-8 passed through unescaped.
std::string canonical_bytes(const json& value);

/// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

/// Digest of an artifact body that is already in canonical form.
inline std::string hash_artifact(std::string_view canonical_body) { return sha256_hex(canonical_body); }

}  // namespace smactr
