#pragma once

#include <string>
#include <string_view>

namespace valuekit {

// Original Porter suffix-stripping algorithm (1980 rules, no later
// extensions), applied after lowercasing and an irregular-form exception
// table that stands in for lemmatization ("children" -> "child").
// Deterministic; non-alphabetic input is returned lowercased.
std::string stem(std::string_view word);

// The raw algorithm without the exception table, for callers that want
// pure suffix stripping.
std::string porter_stem(std::string_view word);

}  // namespace valuekit
