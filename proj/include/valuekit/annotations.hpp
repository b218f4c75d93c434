#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "valuekit/core.hpp"

namespace valuekit {

inline constexpr int kVoteCategories = 3;  // yes, no, unrelated

// Why a (scenario, dimension) group produced no sample.
enum class DropReason { ModeTie, BelowMinAgreement };

struct DroppedGroup {
  std::string scenario_id;
  ValueDimension dimension;
  DropReason reason;
  int modal_count;
  int total_votes;
};

struct AggregationResult {
  std::vector<AnnotatedSample> samples;
  std::vector<DroppedGroup> dropped;
};

// Raw per-worker votes plus the scenario texts they refer to.
struct RawAnnotations {
  std::vector<Annotation> votes;
  std::map<std::string, std::string> scenario_texts;
};

// Majority-vote aggregation: each (scenario, dimension) group with a modal
// vote count >= min_agree yields one sample labeled with the quantized modal
// vote; groups with a tied mode or too little agreement are dropped and
// reported. Duplicate (scenario, dimension, worker) votes are rejected.
AggregationResult aggregate_annotations(const RawAnnotations& raw,
                                        int min_agree = 3);

// Augmented variant: groups that aggregate_annotations would drop are kept
// with label 0 ("unrelated") and agreement equal to their modal count.
AggregationResult make_augmented(const RawAnnotations& raw, int min_agree = 3);

// Fleiss' kappa over per-item category counts. Every row must sum to the
// same rater count n >= 2. The all-one-category degenerate case (expected
// agreement 1) is defined as 1.0 when observed agreement is also perfect.
double fleiss_kappa(const std::vector<std::vector<int>>& item_category_counts);
double fleiss_kappa(const std::vector<std::array<int, kVoteCategories>>& counts);

struct AgreementReport {
  double raw_agreement = 0.0;  // mean per-item observed agreement, in [0, 1]
  double kappa = 0.0;
  struct ItemCounts {
    std::string scenario_id;
    ValueDimension dimension;
    std::array<int, kVoteCategories> counts;  // yes, no, unrelated
  };
  std::vector<ItemCounts> per_item;
};

AgreementReport agreement_report(const RawAnnotations& raw);

}  // namespace valuekit
