#include "valuekit/reward.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace valuekit {

namespace {

constexpr double kNormTolerance = 1e-9;

void require_normalized(std::span<const ValueVector> vectors,
                        std::string_view what) {
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (!is_unit_or_zero(vectors[i], kNormTolerance))
      throw InvalidInputError(std::string(what) + " vector " +
                              std::to_string(i + 1) +
                              " is not normalized (norm must be 0 or 1)");
  }
}

ValueVector scored(const ValueFn& value_fn, const std::string& text) {
  try {
    return value_fn(text);
  } catch (const std::exception& e) {
    throw Error("value function failed for \"" + text + "\": " + e.what());
  }
}

}  // namespace

MatchResult match_values(std::span<const ValueVector> persona_vectors,
                         std::span<const ValueVector> utterance_vectors,
                         bool clamp_terms) {
  const std::size_t n = persona_vectors.size();
  const std::size_t t_len = utterance_vectors.size();
  if (n < 1) throw InvalidInputError("match_values: need at least 1 persona");
  if (t_len < 1)
    throw InvalidInputError("match_values: need at least 1 utterance");
  require_normalized(persona_vectors, "persona");
  require_normalized(utterance_vectors, "utterance");

  MatchResult result;
  result.clamped = clamp_terms;
  result.r.assign(t_len, -1.0);
  result.m.assign(t_len, kNoMatch);
  result.gamma.assign(n, 1);
  result.gamma_unmatched = 1;
  result.terms.assign(t_len, 0.0);

  // Greedy pass: best strictly-improving dot per turn, first index wins ties.
  for (std::size_t t = 0; t < t_len; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      double d = dot(persona_vectors[i], utterance_vectors[t]);
      if (d > result.r[t]) {
        result.r[t] = d;
        result.m[t] = static_cast<int>(i) + 1;
      }
    }
  }

  // Full counting pass before any term is computed, so even a persona
  // matched once carries exponent 2.
  for (std::size_t t = 0; t < t_len; ++t) {
    if (result.m[t] == kNoMatch)
      ++result.gamma_unmatched;
    else
      ++result.gamma[static_cast<std::size_t>(result.m[t] - 1)];
  }

  double sum = 0.0;
  for (std::size_t t = 0; t < t_len; ++t) {
    double r = result.r[t];
    double term = 0.0;
    if (r != 0.0) {
      double sign = r > 0.0 ? 1.0 : -1.0;
      int gamma = result.m[t] == kNoMatch
                      ? result.gamma_unmatched
                      : result.gamma[static_cast<std::size_t>(result.m[t] - 1)];
      term = sign * std::pow(std::abs(r), sign * static_cast<double>(gamma));
      if (clamp_terms) {
        term = std::clamp(term, -1.0, 1.0);
      } else if (!std::isfinite(term)) {
        throw RewardOverflowError(
            "reward term overflow at turn " + std::to_string(t + 1) +
            " (r = " + std::to_string(r) +
            "); enable term clamping to bound contributions");
      }
    }
    result.terms[t] = term;
    sum += term;
  }
  result.reward = sum / static_cast<double>(n);
  return result;
}

RewardOutcome reward(const std::vector<std::string>& persona_sentences,
                     const std::vector<std::string>& utterances,
                     const ValueFn& value_fn, bool clamp_terms) {
  if (persona_sentences.empty())
    throw InvalidInputError("reward: persona must have at least 1 sentence");
  if (utterances.empty())
    throw InvalidInputError("reward: need at least 1 utterance");
  RewardOutcome outcome;
  outcome.persona.sentences = persona_sentences;
  for (const auto& s : persona_sentences)
    outcome.persona.vectors.push_back(normalize(scored(value_fn, s)));
  outcome.trace.utterances = utterances;
  for (const auto& u : utterances)
    outcome.trace.vectors.push_back(normalize(scored(value_fn, u)));
  outcome.match =
      match_values(outcome.persona.vectors, outcome.trace.vectors, clamp_terms);
  return outcome;
}

std::vector<RankedCandidate> rerank_candidates(
    const std::vector<std::string>& persona_sentences,
    const std::vector<std::string>& prior_utterances,
    const std::vector<std::string>& candidates, const ValueFn& value_fn,
    bool clamp_terms) {
  if (candidates.empty())
    throw InvalidInputError("rerank_candidates: no candidates");
  double base = 0.0;  // reward over an empty trace
  if (!prior_utterances.empty())
    base =
        reward(persona_sentences, prior_utterances, value_fn, clamp_terms)
            .match.reward;

  std::vector<RankedCandidate> ranked;
  ranked.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<std::string> extended = prior_utterances;
    extended.push_back(candidates[i]);
    double with_candidate =
        reward(persona_sentences, extended, value_fn, clamp_terms).match.reward;
    ranked.push_back({candidates[i], with_candidate - base, i});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) {
                     return a.score > b.score;
                   });
  return ranked;
}

SpeakerProfile profile_speaker(const std::vector<std::string>& utterances,
                               const ValueFn& value_fn) {
  if (utterances.empty())
    throw InvalidInputError("profile_speaker: need at least 1 utterance");
  SpeakerProfile profile;
  for (const auto& u : utterances)
    profile.per_utterance.push_back(scored(value_fn, u));
  for (ValueDimension d : kAllDimensions) {
    double sum = 0.0;
    for (const auto& v : profile.per_utterance) sum += v[d];
    double mean = sum / static_cast<double>(profile.per_utterance.size());
    profile.profile.set(d, std::clamp(mean, -1.0, 1.0));
  }
  return profile;
}

std::string format_match_trace(const MatchResult& result,
                               const std::vector<std::string>* utterances) {
  std::ostringstream out;
  char buf[96];
  out << "# turn  r  m  gamma  term" << (utterances ? "  utterance" : "")
      << "\n";
  for (std::size_t t = 0; t < result.r.size(); ++t) {
    int gamma = result.m[t] == kNoMatch
                    ? result.gamma_unmatched
                    : result.gamma[static_cast<std::size_t>(result.m[t] - 1)];
    std::snprintf(buf, sizeof(buf), "%zu\t%.17g\t", t + 1, result.r[t]);
    out << buf;
    if (result.m[t] == kNoMatch)
      out << "none";
    else
      out << result.m[t];
    std::snprintf(buf, sizeof(buf), "\t%d\t%.17g", gamma, result.terms[t]);
    out << buf;
    if (utterances && t < utterances->size()) out << "\t" << (*utterances)[t];
    out << "\n";
  }
  std::snprintf(buf, sizeof(buf), "R\t%.17g\n", result.reward);
  out << buf;
  if (result.clamped) out << "# terms clamped to [-1, 1]\n";
  return out.str();
}

}  // namespace valuekit
