#include "valuekit/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace valuekit {

void EmbeddingTable::insert(std::string word, std::vector<double> vec) {
  if (word.empty()) throw InvalidInputError("embedding word must be non-empty");
  if (vec.empty()) throw InvalidInputError("embedding vector must be non-empty");
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_)
    throw InvalidInputError("embedding dimension mismatch for \"" + word +
                            "\": expected " + std::to_string(dim_) + ", got " +
                            std::to_string(vec.size()));
  vectors_[std::move(word)] = std::move(vec);
}

const std::vector<double>* EmbeddingTable::find(std::string_view word) const {
  auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embedding file: " + path.string());
  EmbeddingTable table;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    std::vector<double> vec;
    double v;
    while (fields >> v) vec.push_back(v);
    if (first) {
      first = false;
      // `count dim` header: exactly one numeric field and a numeric "word".
      if (vec.size() == 1 &&
          word.find_first_not_of("0123456789") == std::string::npos)
        continue;
    }
    if (vec.empty())
      throw DecodeError(path.string() + ":" + std::to_string(line_no) +
                        ": no vector components for \"" + word + "\"");
    try {
      table.insert(std::move(word), std::move(vec));
    } catch (const InvalidInputError& e) {
      throw DecodeError(path.string() + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  return table;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw InvalidInputError("cosine_similarity: length mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

Lexicon expand_lexicon_embedding(const Lexicon& lexicon,
                                 const EmbeddingTable& table, int k,
                                 double min_sim, ExpansionReport* report) {
  if (k < 1) throw InvalidInputError("expansion k must be >= 1");
  if (min_sim < -1.0 || min_sim > 1.0)
    throw InvalidInputError("min_sim must be in [-1, 1]");
  if (table.empty()) throw InvalidInputError("embedding table is empty");

  Lexicon out = lexicon;
  ExpansionReport local;
  for (ValueDimension d : kAllDimensions) {
    // Neighbors are selected against the tiers as they were before the
    // expansion, so keyword processing order cannot matter.
    const std::set<std::string> existing = lexicon.all_words(d);
    std::set<std::string> additions;
    for (const auto& keyword : lexicon.tier(d, LexiconTier::Definitional)) {
      const std::vector<double>* anchor = table.find(keyword);
      if (anchor == nullptr) {
        local.missing_keywords.push_back(keyword);
        continue;
      }
      std::vector<std::pair<double, std::string_view>> candidates;
      for (const auto& [word, vec] : table.entries()) {
        if (word == keyword || existing.count(word)) continue;
        double sim = cosine_similarity(*anchor, vec);
        if (sim >= min_sim) candidates.emplace_back(sim, word);
      }
      std::sort(candidates.begin(), candidates.end(),
                [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first > b.first;
                  return a.second < b.second;
                });
      for (std::size_t i = 0; i < candidates.size() && i < std::size_t(k); ++i) {
        std::string w(candidates[i].second);
        for (char& c : w)
          c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        additions.insert(std::move(w));
      }
    }
    for (const auto& w : additions) {
      if (!out.contains(d, w)) {
        out.add(d, LexiconTier::EmbeddingNeighbor, w);
        ++local.added;
      }
    }
  }
  if (report) *report = std::move(local);
  return out;
}

}  // namespace valuekit
