#include "valuekit/json_support.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "valuekit/rng.hpp"

namespace valuekit {

nlohmann::json value_vector_to_json(const ValueVector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < kNumDimensions; ++i) arr.push_back(v.at_index(i));
  return arr;
}

ValueVector value_vector_from_json(const nlohmann::json& j) {
  ValueVector v;
  if (j.is_array()) {
    if (j.size() != kNumDimensions)
      throw DecodeError("value vector array must have exactly " +
                        std::to_string(kNumDimensions) + " components, got " +
                        std::to_string(j.size()));
    for (int i = 0; i < kNumDimensions; ++i) {
      if (!j[static_cast<std::size_t>(i)].is_number())
        throw DecodeError("value vector component " + std::to_string(i) +
                          " is not a number");
      v.set(kAllDimensions[static_cast<std::size_t>(i)],
            j[static_cast<std::size_t>(i)].get<double>());
    }
    return v;
  }
  if (j.is_object()) {
    if (j.size() != kNumDimensions)
      throw DecodeError("value vector map must have exactly the ten "
                        "dimension codes");
    for (const auto& [key, val] : j.items()) {
      auto d = parse_dimension(key);
      if (!d) throw DecodeError("unknown value dimension key \"" + key + "\"");
      if (!val.is_number())
        throw DecodeError("value for \"" + key + "\" is not a number");
      v.set(*d, val.get<double>());
    }
    return v;
  }
  throw DecodeError("value vector must be an array or a code-keyed map");
}

std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for checksum: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(fnv1a64(buf.str())));
  return out;
}

}  // namespace valuekit
