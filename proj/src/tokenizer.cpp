#include "valuekit/tokenizer.hpp"

#include <cctype>

#include "valuekit/core.hpp"

namespace valuekit {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

bool is_space_byte(unsigned char c) { return std::isspace(c) != 0; }

}  // namespace

void TokenizerConfig::validate() const {
  if (ngram_order < 1)
    throw InvalidInputError("tokenizer ngram_order must be >= 1, got " +
                            std::to_string(ngram_order));
}

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& config) {
  config.validate();
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  for (unsigned char c : text) {
    if (is_space_byte(c)) {
      flush();
    } else if (is_word_byte(c)) {
      current.push_back(config.lowercase && c < 0x80
                            ? static_cast<char>(std::tolower(c))
                            : static_cast<char>(c));
    } else {
      flush();
      tokens.emplace_back(1, static_cast<char>(c));
    }
  }
  flush();
  return tokens;
}

}  // namespace valuekit
