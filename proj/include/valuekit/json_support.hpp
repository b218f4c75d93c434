#pragma once

#include <json.hpp>

#include "valuekit/core.hpp"

namespace valuekit {

// Serialized form of a ValueVector: an ordered array of ten reals in
// canonical dimension order. Input also accepts a code-keyed map with
// exactly the ten short codes.
nlohmann::json value_vector_to_json(const ValueVector& v);
ValueVector value_vector_from_json(const nlohmann::json& j);

// FNV-1a 64 checksum of a file's bytes, as 16 hex digits.
std::string file_checksum(const std::filesystem::path& path);

}  // namespace valuekit
