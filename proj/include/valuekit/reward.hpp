#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "valuekit/core.hpp"

namespace valuekit {

// Persona profile: one sentence per fact plus its normalized value vector.
struct PersonaProfile {
  std::vector<std::string> sentences;
  std::vector<ValueVector> vectors;  // each with norm 1 or 0
};

// Generated dialogue side of a conversation, with normalized vectors.
struct DialogueTrace {
  std::vector<std::string> utterances;
  std::vector<ValueVector> vectors;
};

// Sentinel match index for a turn whose best dot never beat the -1
// initializer (only reachable when every dot equals -1 exactly).
inline constexpr int kNoMatch = -1;

// Full trace of the greedy value-matching reward. Persona indices are
// 1-based to mirror i = 1..N; gamma[i-1] is the counter for persona i and
// gamma_unmatched the sentinel bucket.
struct MatchResult {
  std::vector<double> r;      // best dot per turn, in [-1, 1]
  std::vector<int> m;         // matched persona index per turn, or kNoMatch
  std::vector<int> gamma;     // size N, initialized to 1
  int gamma_unmatched = 1;
  std::vector<double> terms;  // sign(r_t)*|r_t|^(sign(r_t)*gamma_{m_t})
  double reward = 0.0;        // sum of terms divided by N
  bool clamped = false;       // whether terms were clamped to [-1, 1]
};

// Greedy per-turn matching of utterance vectors against persona vectors:
// each turn takes the best, strictly-improving dot product (first persona
// wins ties), gamma counts matches per persona in a full pass, and each
// turn contributes sign(r)*|r|^(sign(r)*gamma). sign(0) terms are exactly 0.
// All inputs must already be normalized (norm 0 or 1 within 1e-9).
//
// Negative r in (-1, 0) raises |r| to a negative power, which can exceed 1
// and grow without bound as r approaches 0 from below; with clamp_terms off
// a non-finite term raises RewardOverflowError naming the turn, with it on
// every term is clamped to [-1, 1] before summing.
MatchResult match_values(std::span<const ValueVector> persona_vectors,
                         std::span<const ValueVector> utterance_vectors,
                         bool clamp_terms = false);

using ValueFn = std::function<ValueVector(const std::string&)>;

struct RewardOutcome {
  PersonaProfile persona;
  DialogueTrace trace;
  MatchResult match;
};

// Scores every persona sentence and utterance with value_fn, normalizes the
// vectors, and delegates to match_values.
RewardOutcome reward(const std::vector<std::string>& persona_sentences,
                     const std::vector<std::string>& utterances,
                     const ValueFn& value_fn, bool clamp_terms = false);

struct RankedCandidate {
  std::string text;
  double score = 0.0;          // reward delta from appending this candidate
  std::size_t original_index = 0;
};

// Scores each candidate by the reward gain of appending it to the prior
// trace (the reward of an empty trace is 0) and returns them sorted by
// descending score; ties keep their original order.
std::vector<RankedCandidate> rerank_candidates(
    const std::vector<std::string>& persona_sentences,
    const std::vector<std::string>& prior_utterances,
    const std::vector<std::string>& candidates, const ValueFn& value_fn,
    bool clamp_terms = false);

struct SpeakerProfile {
  ValueVector profile;                    // component-wise mean, in [-1, 1]
  std::vector<ValueVector> per_utterance;  // raw scores, for radar export
};

SpeakerProfile profile_speaker(const std::vector<std::string>& utterances,
                               const ValueFn& value_fn);

// Audit-trail text: per turn r_t, m_t, gamma, term (and the utterance when
// provided), then the final reward.
std::string format_match_trace(
    const MatchResult& result,
    const std::vector<std::string>* utterances = nullptr);

}  // namespace valuekit
