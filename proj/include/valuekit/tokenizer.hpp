#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace valuekit {

struct TokenizerConfig {
  bool lowercase = true;
  int ngram_order = 2;  // unigrams + bigrams by default; must be >= 1

  void validate() const;
};

// Splits text into word tokens and standalone punctuation tokens.
// Word characters are ASCII letters/digits plus any non-ASCII byte (so UTF-8
// words survive intact); every other printable character becomes its own
// token. Lowercasing is ASCII-only. "" -> [].
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& config = {});

}  // namespace valuekit
