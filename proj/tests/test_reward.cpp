#include <doctest.h>

#include <chrono>
#include <cmath>
#include <map>
#include <random>

#include "valuekit/reward.hpp"
#include "valuekit/rng.hpp"

using namespace valuekit;

namespace {

// Independent straight-line re-execution of the greedy matching pseudocode,
// kept deliberately naive and separate from the library implementation.
struct OracleResult {
  std::vector<double> r;
  std::vector<int> m;            // 1-based, -1 when unmatched
  std::map<int, int> gamma;      // keyed by m value, including -1
  std::vector<double> terms;
  double reward = 0.0;
};

OracleResult oracle_match(const std::vector<ValueVector>& p,
                          const std::vector<ValueVector>& x) {
  const int n = static_cast<int>(p.size());
  const int t_len = static_cast<int>(x.size());
  OracleResult out;
  out.r.assign(t_len, 0.0);
  out.m.assign(t_len, 0);
  for (int t = 0; t < t_len; ++t) {
    double r_t = -1.0;
    int m_t = -1;
    for (int i = 1; i <= n; ++i) {
      double d = 0.0;
      for (int k = 0; k < kNumDimensions; ++k)
        d += p[i - 1].at_index(k) * x[t].at_index(k);
      if (d > r_t) {
        r_t = d;
        m_t = i;
      }
    }
    out.r[t] = r_t;
    out.m[t] = m_t;
  }
  for (int i = 1; i <= n; ++i) out.gamma[i] = 1;
  out.gamma[-1] = 1;
  for (int t = 0; t < t_len; ++t) out.gamma[out.m[t]] += 1;
  double big_r = 0.0;
  out.terms.assign(t_len, 0.0);
  for (int t = 0; t < t_len; ++t) {
    double r_t = out.r[t];
    double sign = r_t > 0.0 ? 1.0 : (r_t < 0.0 ? -1.0 : 0.0);
    double term =
        sign == 0.0
            ? 0.0
            : sign * std::pow(std::abs(r_t), sign * out.gamma[out.m[t]]);
    out.terms[t] = term;
    big_r += term;
  }
  out.reward = big_r / n;
  return out;
}

ValueVector unit(ValueDimension d, double sign = 1.0) {
  ValueVector v;
  v.set(d, sign);
  return v;
}

ValueVector random_unit_or_zero(std::mt19937_64& rng) {
  if (bounded_rand(rng, 5) == 0) return ValueVector{};  // zero vector
  ValueVector v;
  double norm2 = 0.0;
  for (ValueDimension d : kAllDimensions) {
    double c = 2.0 * unit_real(rng) - 1.0;
    v.set(d, c);
    norm2 += c * c;
  }
  if (norm2 == 0.0) return v;
  double norm = std::sqrt(norm2);
  for (ValueDimension d : kAllDimensions) v.set(d, v[d] / norm);
  return v;
}

ValueFn table_fn(std::map<std::string, ValueVector> table) {
  return [table = std::move(table)](const std::string& text) {
    auto it = table.find(text);
    if (it == table.end()) throw std::runtime_error("no vector for text");
    return it->second;
  };
}

// The unclamped formula can produce terms of enormous magnitude (|r|^-gamma
// as r -> 0-), so cross-instance comparisons of the summed reward need a
// relative tolerance.
bool reward_close(double a, double b) {
  return std::abs(a - b) <=
         1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("match_values closed cases") {
  SUBCASE("perfect single match") {
    auto res = match_values(std::vector{unit(ValueDimension::Security)},
                            std::vector{unit(ValueDimension::Security)});
    CHECK(res.r == std::vector<double>{1.0});
    CHECK(res.m == std::vector<int>{1});
    CHECK(res.gamma == std::vector<int>{2});
    CHECK(res.terms == std::vector<double>{1.0});
    CHECK(std::abs(res.reward - 1.0) < 1e-12);
  }
  SUBCASE("orthogonal vectors contribute exactly zero") {
    auto res = match_values(std::vector{unit(ValueDimension::Security)},
                            std::vector{unit(ValueDimension::Power)});
    CHECK(res.r == std::vector<double>{0.0});
    CHECK(res.m == std::vector<int>{1});
    CHECK(res.terms == std::vector<double>{0.0});
    CHECK(std::abs(res.reward) < 1e-12);
  }
  SUBCASE("two personas, two turns, repetition discount") {
    ValueVector mixed;
    mixed.set(ValueDimension::Security, 0.6);
    mixed.set(ValueDimension::Power, 0.8);
    std::vector<ValueVector> persona = {unit(ValueDimension::Security),
                                        unit(ValueDimension::Power)};
    std::vector<ValueVector> turns = {mixed, unit(ValueDimension::Power)};
    auto res = match_values(persona, turns);
    CHECK(res.r[0] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(res.r[1] == 1.0);
    CHECK(res.m == std::vector<int>{2, 2});
    CHECK(res.gamma == std::vector<int>{1, 3});
    CHECK(res.terms[0] == doctest::Approx(0.512).epsilon(1e-15));
    CHECK(res.terms[1] == 1.0);
    CHECK(std::abs(res.reward - 0.756) < 1e-12);
    // Line-by-line oracle agreement.
    auto oracle = oracle_match(persona, turns);
    CHECK(std::abs(res.reward - oracle.reward) < 1e-15);
  }
  SUBCASE("exactly opposite vectors hit the sentinel bucket") {
    auto res = match_values(std::vector{unit(ValueDimension::Security)},
                            std::vector{unit(ValueDimension::Security, -1.0)});
    CHECK(res.r == std::vector<double>{-1.0});
    CHECK(res.m == std::vector<int>{kNoMatch});
    CHECK(res.gamma == std::vector<int>{1});
    CHECK(res.gamma_unmatched == 2);
    CHECK(res.terms == std::vector<double>{-1.0});
    CHECK(std::abs(res.reward - (-1.0)) < 1e-12);
  }
}

TEST_CASE("match_values ties go to the first persona") {
  std::vector<ValueVector> persona = {unit(ValueDimension::Power),
                                      unit(ValueDimension::Power)};
  auto res = match_values(persona, std::vector{unit(ValueDimension::Power)});
  CHECK(res.m == std::vector<int>{1});
}

TEST_CASE("match_values validates normalization") {
  ValueVector not_unit;
  not_unit.set(ValueDimension::Power, 0.5);
  CHECK_THROWS_AS(match_values(std::vector{not_unit},
                               std::vector{unit(ValueDimension::Power)}),
                  InvalidInputError);
  CHECK_THROWS_AS(match_values(std::vector<ValueVector>{},
                               std::vector{unit(ValueDimension::Power)}),
                  InvalidInputError);
}

TEST_CASE("match_values agrees with the pseudocode oracle on random input") {
  std::mt19937_64 rng(20260810);
  auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 10000; ++trial) {
    int n = 1 + static_cast<int>(bounded_rand(rng, 5));
    int t_len = 1 + static_cast<int>(bounded_rand(rng, 6));
    std::vector<ValueVector> persona, turns;
    for (int i = 0; i < n; ++i) persona.push_back(random_unit_or_zero(rng));
    for (int t = 0; t < t_len; ++t) turns.push_back(random_unit_or_zero(rng));

    auto res = match_values(persona, turns);
    auto oracle = oracle_match(persona, turns);
    REQUIRE(res.r.size() == oracle.r.size());
    for (int t = 0; t < t_len; ++t) {
      CHECK(res.r[static_cast<std::size_t>(t)] ==
            oracle.r[static_cast<std::size_t>(t)]);
      CHECK(res.m[static_cast<std::size_t>(t)] ==
            oracle.m[static_cast<std::size_t>(t)]);
      CHECK(res.terms[static_cast<std::size_t>(t)] ==
            oracle.terms[static_cast<std::size_t>(t)]);
    }
    for (int i = 1; i <= n; ++i)
      CHECK(res.gamma[static_cast<std::size_t>(i - 1)] == oracle.gamma[i]);
    CHECK(res.gamma_unmatched == oracle.gamma[-1]);
    CHECK(res.reward == oracle.reward);
  }
  auto elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  CHECK(elapsed < 5.0);
}

TEST_CASE("gamma counters account for every turn") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(bounded_rand(rng, 5));
    int t_len = 1 + static_cast<int>(bounded_rand(rng, 6));
    std::vector<ValueVector> persona, turns;
    for (int i = 0; i < n; ++i) persona.push_back(random_unit_or_zero(rng));
    for (int t = 0; t < t_len; ++t) turns.push_back(random_unit_or_zero(rng));
    auto res = match_values(persona, turns);
    int total = res.gamma_unmatched - 1;
    for (int g : res.gamma) {
      CHECK(g >= 1);
      total += g - 1;
    }
    CHECK(total == t_len);
  }
}

TEST_CASE("reward scale invariance") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 1000; ++trial) {
    std::map<std::string, ValueVector> raw;
    std::vector<std::string> persona = {"p1", "p2"};
    std::vector<std::string> turns = {"u1", "u2", "u3"};
    for (const auto& key : {"p1", "p2", "u1", "u2", "u3"}) {
      ValueVector v;
      for (ValueDimension d : kAllDimensions)
        v.set(d, 2.0 * unit_real(rng) - 1.0);
      raw[key] = v;
    }
    double c = 1e-3 + 10.0 * unit_real(rng);
    std::map<std::string, ValueVector> scaled;
    for (const auto& [key, v] : raw) {
      ValueVector s;
      for (ValueDimension d : kAllDimensions) s.set(d, c * v[d]);
      scaled[key] = s;
    }
    auto o1 = reward(persona, turns, table_fn(raw));
    auto o2 = reward(persona, turns, table_fn(scaled));
    CHECK(reward_close(o1.match.reward, o2.match.reward));
    // The per-turn alignments are well conditioned and must agree tightly.
    for (std::size_t t = 0; t < o1.match.r.size(); ++t)
      CHECK(std::abs(o1.match.r[t] - o2.match.r[t]) < 1e-12);
  }
}

TEST_CASE("utterance permutation leaves R unchanged and permutes the trace") {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 1 + static_cast<int>(bounded_rand(rng, 4));
    int t_len = 2 + static_cast<int>(bounded_rand(rng, 5));
    std::vector<ValueVector> persona, turns;
    for (int i = 0; i < n; ++i) persona.push_back(random_unit_or_zero(rng));
    for (int t = 0; t < t_len; ++t) turns.push_back(random_unit_or_zero(rng));

    std::vector<std::size_t> perm(turns.size());
    std::iota(perm.begin(), perm.end(), 0);
    deterministic_shuffle(perm, rng);
    std::vector<ValueVector> permuted;
    for (std::size_t i : perm) permuted.push_back(turns[i]);

    auto a = match_values(persona, turns);
    auto b = match_values(persona, permuted);
    CHECK(reward_close(a.reward, b.reward));
    CHECK(a.gamma == b.gamma);
    CHECK(a.gamma_unmatched == b.gamma_unmatched);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      CHECK(b.r[i] == a.r[perm[i]]);
      CHECK(b.m[i] == a.m[perm[i]]);
      CHECK(b.terms[i] == a.terms[perm[i]]);
    }
  }
}

TEST_CASE("persona permutation leaves R unchanged when dots are distinct") {
  std::mt19937_64 rng(707);
  int checked = 0;
  while (checked < 1000) {
    int n = 2 + static_cast<int>(bounded_rand(rng, 4));
    int t_len = 1 + static_cast<int>(bounded_rand(rng, 5));
    std::vector<ValueVector> persona, turns;
    for (int i = 0; i < n; ++i) persona.push_back(random_unit_or_zero(rng));
    for (int t = 0; t < t_len; ++t) turns.push_back(random_unit_or_zero(rng));

    // Require pairwise-distinct dots per turn, else tie-breaking may differ.
    bool distinct = true;
    for (const auto& u : turns) {
      std::vector<double> dots;
      for (const auto& p : persona) dots.push_back(dot(p, u));
      std::sort(dots.begin(), dots.end());
      for (std::size_t i = 1; i < dots.size(); ++i)
        if (dots[i] == dots[i - 1]) distinct = false;
    }
    if (!distinct) continue;

    std::vector<std::size_t> perm(persona.size());
    std::iota(perm.begin(), perm.end(), 0);
    deterministic_shuffle(perm, rng);
    std::vector<ValueVector> permuted;
    for (std::size_t i : perm) permuted.push_back(persona[i]);

    auto a = match_values(persona, turns);
    auto b = match_values(permuted, turns);
    CHECK(reward_close(a.reward, b.reward));
    ++checked;
  }
}

TEST_CASE("negative near-zero alignment overflows without clamping") {
  // One persona and a dialogue that keeps re-matching it with a tiny
  // negative alignment: |r|^(-gamma) blows up.
  ValueVector barely_negative;
  barely_negative.set(ValueDimension::Security, -1e-200);
  barely_negative.set(ValueDimension::Power, std::sqrt(1.0 - 1e-400));
  std::vector<ValueVector> persona = {unit(ValueDimension::Security)};
  std::vector<ValueVector> turns = {barely_negative, barely_negative};
  CHECK_THROWS_WITH_AS(match_values(persona, turns),
                       doctest::Contains("turn"), RewardOverflowError);

  auto clamped = match_values(persona, turns, true);
  CHECK(clamped.terms == std::vector<double>{-1.0, -1.0});
  CHECK(clamped.reward == -2.0);
}

TEST_CASE("clamped rewards are bounded by T/N") {
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 500; ++trial) {
    int n = 1 + static_cast<int>(bounded_rand(rng, 5));
    int t_len = 1 + static_cast<int>(bounded_rand(rng, 6));
    std::vector<ValueVector> persona, turns;
    for (int i = 0; i < n; ++i) persona.push_back(random_unit_or_zero(rng));
    for (int t = 0; t < t_len; ++t) turns.push_back(random_unit_or_zero(rng));
    auto res = match_values(persona, turns, true);
    double bound = static_cast<double>(t_len) / n + 1e-12;
    CHECK(res.reward <= bound);
    CHECK(res.reward >= -bound);
    for (double term : res.terms) CHECK(std::abs(term) <= 1.0);
  }
}

TEST_CASE("repeating one persona fact is discounted") {
  // 0 < r < 1 repeated against a single persona: the per-term contribution
  // r^gamma shrinks as the repetition count grows.
  ValueVector aligned;
  aligned.set(ValueDimension::Security, 0.6);
  aligned.set(ValueDimension::Power, 0.8);
  std::vector<ValueVector> persona = {unit(ValueDimension::Security)};
  double previous_term = 1.0;
  for (int reps = 1; reps <= 5; ++reps) {
    std::vector<ValueVector> turns(static_cast<std::size_t>(reps), aligned);
    auto res = match_values(persona, turns);
    // All terms are equal: r^(1+reps).
    double term = res.terms[0];
    CHECK(term == doctest::Approx(std::pow(0.6, 1 + reps)).epsilon(1e-12));
    CHECK(term < previous_term);
    previous_term = term;
  }
}

TEST_CASE("reward normalizes raw vectors and composes with match_values") {
  std::map<std::string, ValueVector> raw;
  ValueVector p1;
  p1.set(ValueDimension::Security, 3.0);  // not normalized on purpose
  p1.set(ValueDimension::Power, 4.0);
  raw["persona one"] = p1;
  ValueVector u1;
  u1.set(ValueDimension::Security, 0.3);
  raw["turn one"] = u1;
  ValueVector u2;  // all-zero: no value signal
  raw["turn two"] = u2;

  auto outcome = reward({"persona one"}, {"turn one", "turn two"},
                        table_fn(raw));
  // Compositional oracle: score first, normalize, then match.
  auto direct = match_values(
      std::vector{normalize(p1)},
      std::vector{normalize(u1), normalize(u2)});
  CHECK(outcome.match.reward == direct.reward);
  CHECK(outcome.match.r == direct.r);
  CHECK(outcome.match.terms == direct.terms);
  // Turn two carries the zero vector: dot 0, term exactly 0.
  CHECK(outcome.match.r[1] == 0.0);
  CHECK(outcome.match.terms[1] == 0.0);
}

TEST_CASE("reward of identical persona and utterance is 1") {
  ValueVector v;
  v.set(ValueDimension::Benevolence, 0.5);
  auto fn = table_fn({{"i help people", v}});
  auto outcome = reward({"i help people"}, {"i help people"}, fn);
  CHECK(std::abs(outcome.match.reward - 1.0) < 1e-12);
}

TEST_CASE("reward with all-zero vectors is 0") {
  auto fn = [](const std::string&) { return ValueVector{}; };
  auto outcome = reward({"a", "b"}, {"c", "d"}, fn);
  CHECK(outcome.match.reward == 0.0);
}

TEST_CASE("value_fn failures carry the offending string") {
  auto fn = table_fn({});
  CHECK_THROWS_WITH_AS(reward({"mystery"}, {"x"}, fn),
                       doctest::Contains("mystery"), Error);
}

TEST_CASE("rerank_candidates") {
  ValueVector persona_vec;
  persona_vec.set(ValueDimension::Hedonism, 0.9);
  std::map<std::string, ValueVector> table = {
      {"i love fun", persona_vec},
      {"neutral words", ValueVector{}},
  };
  auto fn = table_fn(table);

  SUBCASE("persona-aligned candidate ranks first over an empty prior") {
    auto ranked = rerank_candidates({"i love fun"}, {},
                                    {"neutral words", "i love fun"}, fn);
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0].text == "i love fun");
    CHECK(ranked[0].score == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ranked[1].score == 0.0);
  }
  SUBCASE("single candidate returns its delta") {
    auto ranked = rerank_candidates({"i love fun"}, {}, {"i love fun"}, fn);
    REQUIRE(ranked.size() == 1);
    CHECK(ranked[0].score == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("duplicates keep their original order") {
    auto ranked = rerank_candidates(
        {"i love fun"}, {}, {"neutral words", "neutral words"}, fn);
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0].original_index == 0);
    CHECK(ranked[1].original_index == 1);
    CHECK(ranked[0].score == ranked[1].score);
  }
  SUBCASE("empty candidate list is rejected") {
    CHECK_THROWS_AS(rerank_candidates({"i love fun"}, {}, {}, fn),
                    InvalidInputError);
  }
}

TEST_CASE("profile_speaker") {
  ValueVector v;
  v.set(ValueDimension::Benevolence, 0.4);
  v.set(ValueDimension::Tradition, -0.2);
  ValueVector neg;
  for (ValueDimension d : kAllDimensions) neg.set(d, -v[d]);
  auto fn = table_fn({{"a", v}, {"b", neg}});

  SUBCASE("single utterance equals its vector") {
    auto profile = profile_speaker({"a"}, fn);
    CHECK(profile.profile == v);
    REQUIRE(profile.per_utterance.size() == 1);
    CHECK(profile.per_utterance[0] == v);
  }
  SUBCASE("opposite vectors cancel") {
    auto profile = profile_speaker({"a", "b"}, fn);
    for (ValueDimension d : kAllDimensions) CHECK(profile.profile[d] == 0.0);
  }
  SUBCASE("empty input is rejected") {
    CHECK_THROWS_AS(profile_speaker({}, fn), InvalidInputError);
  }
}

TEST_CASE("format_match_trace lists every turn and the final reward") {
  std::vector<ValueVector> persona = {unit(ValueDimension::Security)};
  std::vector<ValueVector> turns = {unit(ValueDimension::Security),
                                    unit(ValueDimension::Power)};
  auto res = match_values(persona, turns);
  std::vector<std::string> utterances = {"stay safe", "rule them"};
  std::string text = format_match_trace(res, &utterances);
  CHECK(text.find("stay safe") != std::string::npos);
  CHECK(text.find("rule them") != std::string::npos);
  CHECK(text.find("R\t") != std::string::npos);
}
