#include "valuekit/lexicon.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "valuekit/stemmer.hpp"
#include "valuekit/tokenizer.hpp"

namespace valuekit {

namespace {

constexpr std::string_view kFileHeader = "# valuekit lexicon v1";

bool is_lowercase_word(std::string_view w) {
  if (w.empty()) return false;
  for (unsigned char c : w)
    if (std::isupper(c) || std::isspace(c)) return false;
  return true;
}

}  // namespace

std::string_view tier_name(LexiconTier t) {
  switch (t) {
    case LexiconTier::Definitional:
      return "definitional";
    case LexiconTier::Associated:
      return "associated";
    case LexiconTier::EmbeddingNeighbor:
      return "embedding";
  }
  return "definitional";
}

void Lexicon::add(ValueDimension d, LexiconTier tier, std::string_view word) {
  if (!is_lowercase_word(word))
    throw InvalidInputError("lexicon entries must be non-empty lowercase "
                            "words, got: \"" + std::string(word) + "\"");
  std::string w(word);
  for (LexiconTier other : kAllTiers) {
    if (other == tier) continue;
    if (tiers_[static_cast<int>(d)][static_cast<int>(other)].count(w))
      throw InvalidInputError(
          "word \"" + w + "\" already present in tier " +
          std::string(tier_name(other)) + " of " +
          std::string(dimension_name(d)));
  }
  tiers_[static_cast<int>(d)][static_cast<int>(tier)].insert(std::move(w));
}

bool Lexicon::contains(ValueDimension d, std::string_view word) const {
  std::string w(word);
  for (LexiconTier t : kAllTiers)
    if (tiers_[static_cast<int>(d)][static_cast<int>(t)].count(w)) return true;
  return false;
}

const std::set<std::string>& Lexicon::tier(ValueDimension d,
                                           LexiconTier t) const {
  return tiers_[static_cast<int>(d)][static_cast<int>(t)];
}

std::set<std::string>& Lexicon::tier_mutable(ValueDimension d, LexiconTier t) {
  return tiers_[static_cast<int>(d)][static_cast<int>(t)];
}

std::set<std::string> Lexicon::all_words(ValueDimension d) const {
  std::set<std::string> out;
  for (LexiconTier t : kAllTiers) {
    const auto& s = tier(d, t);
    out.insert(s.begin(), s.end());
  }
  return out;
}

std::size_t Lexicon::size() const {
  std::size_t n = 0;
  for (const auto& dim : tiers_)
    for (const auto& t : dim) n += t.size();
  return n;
}

Lexicon Lexicon::default_lexicon() {
  // Single-word keywords drawn from the ten value definitions; multi-word
  // value items contribute their content words.
  static const struct {
    ValueDimension dim;
    std::initializer_list<std::string_view> words;
  } kDefaults[] = {
      {ValueDimension::Achievement,
       {"achievement", "ambitious", "successful", "success", "capable",
        "influential", "competence", "competent"}},
      {ValueDimension::Benevolence,
       {"benevolence", "helpful", "honest", "forgiving", "responsible",
        "loyal", "friendship", "love", "welfare"}},
      {ValueDimension::Conformity,
       {"conformity", "obedient", "discipline", "politeness", "honoring",
        "parents", "elders", "restraint"}},
      {ValueDimension::Hedonism,
       {"hedonism", "pleasure", "enjoying", "gratification", "indulgent"}},
      {ValueDimension::Power,
       {"power", "authority", "wealth", "status", "prestige", "dominance",
        "control"}},
      {ValueDimension::Security,
       {"security", "safety", "harmony", "stability", "order", "clean",
        "healthy", "belonging"}},
      {ValueDimension::SelfDirection,
       {"independent", "independence", "freedom", "creativity", "creating",
        "choosing", "exploring", "curious", "goals", "privacy", "autonomy"}},
      {ValueDimension::Stimulation,
       {"stimulation", "excitement", "exciting", "novelty", "challenge",
        "varied", "daring"}},
      {ValueDimension::Tradition,
       {"tradition", "respect", "customs", "humble", "devout", "spiritual",
        "religious"}},
      {ValueDimension::Universalism,
       {"universalism", "understanding", "appreciation", "tolerance",
        "protection", "broadminded", "justice", "equality", "peace", "beauty",
        "unity", "nature", "wisdom", "environment"}},
  };
  Lexicon lex;
  for (const auto& entry : kDefaults)
    for (auto w : entry.words)
      lex.add(entry.dim, LexiconTier::Definitional, w);
  return lex;
}

std::string Lexicon::to_text() const {
  std::ostringstream out;
  out << kFileHeader << "\n";
  for (ValueDimension d : kAllDimensions) {
    out << "[" << dimension_name(d) << "]\n";
    for (LexiconTier t : kAllTiers) {
      out << tier_name(t) << ":";
      for (const auto& w : tier(d, t)) out << " " << w;
      out << "\n";
    }
  }
  return out.str();
}

void Lexicon::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot open lexicon file for writing: " + path.string());
  out << to_text();
}

Lexicon Lexicon::from_text(std::string_view text, std::string_view origin) {
  auto fail = [&](int line_no, const std::string& what) -> void {
    std::string where = origin.empty() ? "lexicon" : std::string(origin);
    throw DecodeError(where + ":" + std::to_string(line_no) + ": " + what);
  };
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_dim = false;
  ValueDimension current = ValueDimension::Achievement;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated dimension header");
      auto d = parse_dimension(line.substr(1, line.size() - 2));
      if (!d) fail(line_no, "unknown dimension: " + line);
      current = *d;
      have_dim = true;
      continue;
    }
    if (!have_dim) fail(line_no, "word list before any dimension header");
    auto colon = line.find(':');
    if (colon == std::string::npos) fail(line_no, "missing tier tag");
    std::string tag = line.substr(0, colon);
    LexiconTier tier;
    if (tag == "definitional")
      tier = LexiconTier::Definitional;
    else if (tag == "associated")
      tier = LexiconTier::Associated;
    else if (tag == "embedding")
      tier = LexiconTier::EmbeddingNeighbor;
    else {
      fail(line_no, "unknown tier tag: " + tag);
      continue;
    }
    std::istringstream words(line.substr(colon + 1));
    std::string w;
    while (words >> w) {
      try {
        lex.add(current, tier, w);
      } catch (const InvalidInputError& e) {
        fail(line_no, e.what());
      }
    }
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open lexicon file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str(), path.string());
}

std::set<ValueDimension> match_scenario(std::string_view text,
                                        const Lexicon& lexicon) {
  TokenizerConfig cfg;
  cfg.ngram_order = 1;
  std::set<std::string> token_stems;
  for (const auto& tok : tokenize(text, cfg)) token_stems.insert(stem(tok));

  std::set<ValueDimension> matched;
  for (ValueDimension d : kAllDimensions) {
    bool hit = false;
    for (LexiconTier t : kAllTiers) {
      for (const auto& kw : lexicon.tier(d, t)) {
        if (token_stems.count(stem(kw))) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    if (hit) matched.insert(d);
  }
  return matched;
}

}  // namespace valuekit
