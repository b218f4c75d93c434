#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "valuekit/lexicon.hpp"

namespace valuekit {

// Word -> dense vector table with a fixed dimension. Words are kept sorted
// so every scan over the vocabulary is deterministic.
class EmbeddingTable {
 public:
  void insert(std::string word, std::vector<double> vec);
  const std::vector<double>* find(std::string_view word) const;
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }

  const std::map<std::string, std::vector<double>, std::less<>>& entries()
      const {
    return vectors_;
  }

  // Standard word-vector text format: one line per word, `word v1 v2 ... vD`,
  // space separated. A leading `count dim` header line is auto-detected.
  static EmbeddingTable load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::vector<double>, std::less<>> vectors_;
  std::size_t dim_ = 0;
};

double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct ExpansionReport {
  std::vector<std::string> missing_keywords;  // definitional words not in table
  int added = 0;
};

// For each definitional keyword present in the table, adds up to k
// nearest-neighbor words (cosine similarity >= min_sim) to the
// embedding-neighbor tier, excluding words already in any tier of that
// dimension. Ties in similarity break lexicographically. Keywords absent
// from the table are skipped and recorded in the report.
Lexicon expand_lexicon_embedding(const Lexicon& lexicon,
                                 const EmbeddingTable& table, int k,
                                 double min_sim,
                                 ExpansionReport* report = nullptr);

}  // namespace valuekit
