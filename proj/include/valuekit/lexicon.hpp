#pragma once

#include <array>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include "valuekit/core.hpp"

namespace valuekit {

enum class LexiconTier { Definitional, Associated, EmbeddingNeighbor };

inline constexpr std::array<LexiconTier, 3> kAllTiers = {
    LexiconTier::Definitional, LexiconTier::Associated,
    LexiconTier::EmbeddingNeighbor};

std::string_view tier_name(LexiconTier t);

// Per-dimension keyword sets in three tiers: words from the value
// definitions, words collected from the association service, and words found
// near the definitional keywords in an embedding space. Tiers are disjoint
// within a dimension; all entries lowercase and non-empty.
class Lexicon {
 public:
  // Adds word to the tier; throws InvalidInputError if the word is empty,
  // not lowercase, or already present in another tier of this dimension.
  // Adding a word already in the same tier is a no-op.
  void add(ValueDimension d, LexiconTier tier, std::string_view word);

  bool contains(ValueDimension d, std::string_view word) const;
  const std::set<std::string>& tier(ValueDimension d, LexiconTier t) const;

  // Union of all tiers for the dimension.
  std::set<std::string> all_words(ValueDimension d) const;

  std::size_t size() const;  // total words across dimensions and tiers
  bool empty() const { return size() == 0; }

  // Keywords from the ten value definitions, definitional tier only.
  static Lexicon default_lexicon();

  // One record per dimension with tier-tagged word lists; emitted in
  // canonical order with sorted words so load/save round-trips
  // byte-identically.
  static Lexicon load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  std::string to_text() const;
  static Lexicon from_text(std::string_view text, std::string_view origin = "");

 private:
  std::set<std::string>& tier_mutable(ValueDimension d, LexiconTier t);
  std::array<std::array<std::set<std::string>, 3>, kNumDimensions> tiers_;
};

// Every dimension for which any stemmed token of text equals any stemmed
// lexicon keyword of that dimension (all tiers). Empty set when nothing
// matches.
std::set<ValueDimension> match_scenario(std::string_view text,
                                        const Lexicon& lexicon);

}  // namespace valuekit
