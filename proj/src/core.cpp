#include "valuekit/core.hpp"

#include <cctype>
#include <cmath>

namespace valuekit {

namespace {

struct DimensionInfo {
  std::string_view code;
  std::string_view name;
  std::string_view group;
};

constexpr std::array<DimensionInfo, kNumDimensions> kDimensionInfo = {{
    {"ACH", "ACHIEVEMENT", "self-enhancement"},
    {"BEN", "BENEVOLENCE", "self-transcendence"},
    {"CON", "CONFORMITY", "conservation"},
    {"HED", "HEDONISM", "self-enhancement"},
    {"POW", "POWER", "self-enhancement"},
    {"SEC", "SECURITY", "conservation"},
    {"SD", "SELF_DIRECTION", "openness-to-change"},
    {"STI", "STIMULATION", "openness-to-change"},
    {"TRA", "TRADITION", "conservation"},
    {"UNI", "UNIVERSALISM", "self-transcendence"},
}};

std::string upper_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view dimension_code(ValueDimension d) {
  return kDimensionInfo[static_cast<int>(d)].code;
}

std::string_view dimension_name(ValueDimension d) {
  return kDimensionInfo[static_cast<int>(d)].name;
}

std::string_view dimension_group(ValueDimension d) {
  return kDimensionInfo[static_cast<int>(d)].group;
}

std::optional<ValueDimension> parse_dimension(std::string_view text) {
  std::string key = upper_ascii(text);
  // Tolerate the hyphenated spelling of SELF_DIRECTION.
  for (char& c : key)
    if (c == '-') c = '_';
  for (int i = 0; i < kNumDimensions; ++i) {
    if (key == kDimensionInfo[i].code || key == kDimensionInfo[i].name)
      return static_cast<ValueDimension>(i);
  }
  return std::nullopt;
}

ValueDimension require_dimension(std::string_view text) {
  auto d = parse_dimension(text);
  if (!d)
    throw InvalidInputError("unknown value dimension: \"" + std::string(text) +
                            "\"");
  return *d;
}

Utility::Utility(double v) : value(v) {
  if (!std::isfinite(v) || v < -1.0 || v > 1.0)
    throw InvalidInputError("utility out of range [-1, 1]: " +
                            std::to_string(v));
}

double l2_norm(const ValueVector& v) {
  double sum = 0.0;
  for (double c : v.components()) sum += c * c;
  return std::sqrt(sum);
}

ValueVector normalize(const ValueVector& v) {
  double norm = l2_norm(v);
  if (norm == 0.0) return v;
  std::array<double, kNumDimensions> out;
  for (int i = 0; i < kNumDimensions; ++i) out[i] = v.at_index(i) / norm;
  return ValueVector(out);
}

double dot(const ValueVector& a, const ValueVector& b) {
  double sum = 0.0;
  for (int i = 0; i < kNumDimensions; ++i) sum += a.at_index(i) * b.at_index(i);
  return sum;
}

bool is_unit_or_zero(const ValueVector& v, double tol) {
  double norm = l2_norm(v);
  return std::abs(norm) <= tol || std::abs(norm - 1.0) <= tol;
}

std::string_view vote_name(Vote v) {
  switch (v) {
    case Vote::Yes:
      return "yes";
    case Vote::No:
      return "no";
    case Vote::Unrelated:
      return "unrelated";
  }
  return "unrelated";
}

Vote parse_vote(std::string_view text) {
  std::string key;
  key.reserve(text.size());
  for (char c : text)
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key == "yes") return Vote::Yes;
  if (key == "no") return Vote::No;
  if (key == "unrelated") return Vote::Unrelated;
  throw InvalidInputError("unknown vote: \"" + std::string(text) + "\"");
}

int quantize_vote(Vote v) {
  switch (v) {
    case Vote::Yes:
      return 1;
    case Vote::No:
      return -1;
    case Vote::Unrelated:
      return 0;
  }
  return 0;
}

int quantize_vote(std::string_view vote_text) {
  return quantize_vote(parse_vote(vote_text));
}

}  // namespace valuekit
