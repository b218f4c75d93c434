#include "valuekit/stemmer.hpp"

#include <array>
#include <cctype>
#include <unordered_map>

namespace valuekit {

namespace {

bool is_vowel_letter(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool is_consonant(const std::string& w, std::size_t i) {
  char c = w[i];
  if (is_vowel_letter(c)) return false;
  if (c == 'y') return i == 0 ? true : !is_consonant(w, i - 1);
  return true;
}

// m in the [C](VC)^m[V] decomposition of the stem.
int measure(const std::string& w, std::size_t len) {
  int m = 0;
  std::size_t i = 0;
  while (i < len && is_consonant(w, i)) ++i;
  while (i < len) {
    while (i < len && !is_consonant(w, i)) ++i;
    if (i == len) break;
    ++m;
    while (i < len && is_consonant(w, i)) ++i;
  }
  return m;
}

bool contains_vowel(const std::string& w, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i)
    if (!is_consonant(w, i)) return true;
  return false;
}

bool ends_double_consonant(const std::string& w) {
  std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: ends consonant-vowel-consonant where the final consonant is not w/x/y.
bool ends_cvc(const std::string& w, std::size_t len) {
  if (len < 3) return false;
  if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) ||
      !is_consonant(w, len - 1))
    return false;
  char c = w[len - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  int min_measure;  // condition: m(stem) > min_measure; -1 means no m check
};

// Longest matching suffix selects the rule; if its condition fails, no other
// rule in the step is attempted.
bool apply_step(std::string& w, const Rule* rules, std::size_t count) {
  const Rule* best = nullptr;
  for (std::size_t i = 0; i < count; ++i) {
    if (ends_with(w, rules[i].suffix) &&
        (!best || rules[i].suffix.size() > best->suffix.size()))
      best = &rules[i];
  }
  if (!best) return false;
  std::size_t stem_len = w.size() - best->suffix.size();
  if (best->min_measure >= 0 && measure(w, stem_len) <= best->min_measure)
    return false;
  w.resize(stem_len);
  w += best->replacement;
  return true;
}

void step1a(std::string& w) {
  static constexpr Rule rules[] = {
      {"sses", "ss", -1}, {"ies", "i", -1}, {"ss", "ss", -1}, {"s", "", -1}};
  apply_step(w, rules, 4);
}

void step1b(std::string& w) {
  if (ends_with(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) w.resize(w.size() - 1);
    return;
  }
  bool fired = false;
  if (ends_with(w, "ed") && contains_vowel(w, w.size() - 2)) {
    w.resize(w.size() - 2);
    fired = true;
  } else if (ends_with(w, "ing") && contains_vowel(w, w.size() - 3)) {
    w.resize(w.size() - 3);
    fired = true;
  }
  if (!fired) return;
  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w += 'e';
  } else if (ends_double_consonant(w)) {
    char c = w.back();
    if (c != 'l' && c != 's' && c != 'z') w.pop_back();
  } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
    w += 'e';
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") && contains_vowel(w, w.size() - 1)) w.back() = 'i';
}

void step2(std::string& w) {
  static constexpr Rule rules[] = {
      {"ational", "ate", 0}, {"tional", "tion", 0}, {"enci", "ence", 0},
      {"anci", "ance", 0},   {"izer", "ize", 0},    {"abli", "able", 0},
      {"alli", "al", 0},     {"entli", "ent", 0},   {"eli", "e", 0},
      {"ousli", "ous", 0},   {"ization", "ize", 0}, {"ation", "ate", 0},
      {"ator", "ate", 0},    {"alism", "al", 0},    {"iveness", "ive", 0},
      {"fulness", "ful", 0}, {"ousness", "ous", 0}, {"aliti", "al", 0},
      {"iviti", "ive", 0},   {"biliti", "ble", 0}};
  apply_step(w, rules, std::size(rules));
}

void step3(std::string& w) {
  static constexpr Rule rules[] = {{"icate", "ic", 0}, {"ative", "", 0},
                                   {"alize", "al", 0}, {"iciti", "ic", 0},
                                   {"ical", "ic", 0},  {"ful", "", 0},
                                   {"ness", "", 0}};
  apply_step(w, rules, std::size(rules));
}

void step4(std::string& w) {
  static constexpr std::string_view suffixes[] = {
      "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement",
      "ment", "ent", "ion",  "ou",  "ism", "ate",  "iti",  "ous", "ive",
      "ize"};
  std::string_view best;
  for (auto s : suffixes)
    if (ends_with(w, s) && s.size() > best.size()) best = s;
  if (best.empty()) return;
  std::size_t stem_len = w.size() - best.size();
  if (measure(w, stem_len) <= 1) return;
  if (best == "ion") {
    char c = stem_len > 0 ? w[stem_len - 1] : '\0';
    if (c != 's' && c != 't') return;
  }
  w.resize(stem_len);
}

void step5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  std::size_t stem_len = w.size() - 1;
  int m = measure(w, stem_len);
  if (m > 1 || (m == 1 && !ends_cvc(w, stem_len))) w.pop_back();
}

void step5b(std::string& w) {
  if (w.size() >= 2 && w.back() == 'l' && ends_double_consonant(w) &&
      measure(w, w.size()) > 1)
    w.pop_back();
}

// Irregular plural/past forms the suffix rules cannot reach.
const std::unordered_map<std::string_view, std::string_view>& exceptions() {
  static const std::unordered_map<std::string_view, std::string_view> table = {
      {"children", "child"}, {"feet", "foot"},   {"geese", "goose"},
      {"men", "man"},        {"women", "woman"}, {"mice", "mouse"},
      {"teeth", "tooth"},    {"people", "person"}, {"wives", "wife"},
      {"lives", "life"},     {"knives", "knife"}, {"leaves", "leaf"},
      {"selves", "self"},    {"oxen", "ox"},
  };
  return table;
}

std::string lowercase_ascii(std::string_view word) {
  std::string w;
  w.reserve(word.size());
  for (char c : word)
    w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return w;
}

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w = lowercase_ascii(word);
  for (char c : w)
    if (c < 'a' || c > 'z') return w;  // only stem plain alphabetic words
  step1a(w);
  step1b(w);
  step1c(w);
  step2(w);
  step3(w);
  step4(w);
  step5a(w);
  step5b(w);
  return w;
}

std::string stem(std::string_view word) {
  std::string w = lowercase_ascii(word);
  auto it = exceptions().find(w);
  if (it != exceptions().end()) return std::string(it->second);
  return porter_stem(w);
}

}  // namespace valuekit
