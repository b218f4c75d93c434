#include "valuekit/annotations.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace valuekit {

namespace {

struct Group {
  std::string scenario_id;
  ValueDimension dimension;
  std::array<int, kVoteCategories> counts{};  // yes, no, unrelated
  int total = 0;
};

int vote_index(Vote v) {
  switch (v) {
    case Vote::Yes:
      return 0;
    case Vote::No:
      return 1;
    case Vote::Unrelated:
      return 2;
  }
  return 2;
}

Vote vote_at(int index) {
  static constexpr Vote kVotes[] = {Vote::Yes, Vote::No, Vote::Unrelated};
  return kVotes[index];
}

// Groups votes by (scenario, dimension) preserving first-appearance order.
std::vector<Group> group_votes(const RawAnnotations& raw) {
  std::vector<Group> groups;
  std::map<std::pair<std::string, int>, std::size_t> index;
  std::set<std::tuple<std::string, int, std::string>> seen;
  for (const auto& ann : raw.votes) {
    auto key = std::make_pair(ann.scenario_id, static_cast<int>(ann.dimension));
    if (!seen.insert({ann.scenario_id, static_cast<int>(ann.dimension),
                      ann.worker_id})
             .second)
      throw InvalidInputError("duplicate vote by worker \"" + ann.worker_id +
                              "\" on scenario \"" + ann.scenario_id +
                              "\" dimension " +
                              std::string(dimension_code(ann.dimension)));
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, groups.size());
      groups.push_back({ann.scenario_id, ann.dimension, {}, 0});
      it = index.find(key);
    }
    Group& g = groups[it->second];
    ++g.counts[vote_index(ann.vote)];
    ++g.total;
  }
  return groups;
}

// Modal category and whether the mode is unique.
std::pair<int, bool> modal_category(const std::array<int, 3>& counts) {
  int best = 0;
  for (int i = 1; i < kVoteCategories; ++i)
    if (counts[i] > counts[best]) best = i;
  bool tie = false;
  for (int i = 0; i < kVoteCategories; ++i)
    if (i != best && counts[i] == counts[best]) tie = true;
  return {best, tie};
}

const std::string& scenario_text(const RawAnnotations& raw,
                                 const std::string& id) {
  auto it = raw.scenario_texts.find(id);
  if (it == raw.scenario_texts.end())
    throw InvalidInputError("no scenario text for id \"" + id + "\"");
  return it->second;
}

AggregationResult aggregate_impl(const RawAnnotations& raw, int min_agree,
                                 bool augmented) {
  if (min_agree < 1) throw InvalidInputError("min_agree must be >= 1");
  AggregationResult result;
  for (const Group& g : group_votes(raw)) {
    auto [best, tie] = modal_category(g.counts);
    int modal_count = g.counts[best];
    bool keep_modal = !tie && modal_count >= min_agree;
    if (keep_modal) {
      result.samples.push_back(
          {{g.scenario_id, scenario_text(raw, g.scenario_id)},
           g.dimension,
           quantize_vote(vote_at(best)),
           modal_count});
      continue;
    }
    if (augmented) {
      result.samples.push_back(
          {{g.scenario_id, scenario_text(raw, g.scenario_id)},
           g.dimension,
           0,
           modal_count});
    } else {
      result.dropped.push_back({g.scenario_id, g.dimension,
                                tie ? DropReason::ModeTie
                                    : DropReason::BelowMinAgreement,
                                modal_count, g.total});
    }
  }
  return result;
}

}  // namespace

AggregationResult aggregate_annotations(const RawAnnotations& raw,
                                        int min_agree) {
  return aggregate_impl(raw, min_agree, false);
}

AggregationResult make_augmented(const RawAnnotations& raw, int min_agree) {
  return aggregate_impl(raw, min_agree, true);
}

double fleiss_kappa(const std::vector<std::vector<int>>& item_category_counts) {
  if (item_category_counts.empty())
    throw InvalidInputError("fleiss_kappa: no items");
  const std::size_t categories = item_category_counts.front().size();
  if (categories < 2)
    throw InvalidInputError("fleiss_kappa: need at least 2 categories");

  long long n = -1;  // raters per item
  for (const auto& row : item_category_counts) {
    if (row.size() != categories)
      throw InvalidInputError("fleiss_kappa: ragged category counts");
    long long total = 0;
    for (int c : row) {
      if (c < 0) throw InvalidInputError("fleiss_kappa: negative count");
      total += c;
    }
    if (n == -1) n = total;
    if (total != n)
      throw InvalidInputError(
          "fleiss_kappa: every item must have the same number of raters "
          "(expected " + std::to_string(n) + ", got " + std::to_string(total) +
          ")");
  }
  if (n < 2)
    throw InvalidInputError("fleiss_kappa: need at least 2 raters per item");

  const double items = static_cast<double>(item_category_counts.size());
  const double raters = static_cast<double>(n);

  double p_bar = 0.0;
  std::vector<double> category_share(categories, 0.0);
  for (const auto& row : item_category_counts) {
    double agree = 0.0;
    for (std::size_t j = 0; j < categories; ++j) {
      agree += static_cast<double>(row[j]) * (row[j] - 1);
      category_share[j] += row[j];
    }
    p_bar += agree / (raters * (raters - 1.0));
  }
  p_bar /= items;

  double p_e = 0.0;
  for (double share : category_share) {
    double p_j = share / (items * raters);
    p_e += p_j * p_j;
  }

  if (p_e >= 1.0) {
    // All votes in a single category: expected agreement is 1. Observed
    // agreement is necessarily 1 too; report perfect agreement.
    if (p_bar >= 1.0 - 1e-12) return 1.0;
    throw InvalidInputError("fleiss_kappa: degenerate expected agreement");
  }
  return (p_bar - p_e) / (1.0 - p_e);
}

double fleiss_kappa(
    const std::vector<std::array<int, kVoteCategories>>& counts) {
  std::vector<std::vector<int>> rows;
  rows.reserve(counts.size());
  for (const auto& row : counts)
    rows.push_back({row[0], row[1], row[2]});
  return fleiss_kappa(rows);
}

AgreementReport agreement_report(const RawAnnotations& raw) {
  AgreementReport report;
  std::vector<std::array<int, kVoteCategories>> counts;
  for (const Group& g : group_votes(raw)) {
    report.per_item.push_back({g.scenario_id, g.dimension, g.counts});
    counts.push_back(g.counts);
  }
  if (counts.empty()) throw InvalidInputError("agreement_report: no votes");

  report.kappa = fleiss_kappa(counts);  // also validates equal rater counts

  long long n = 0;
  for (int c : counts.front()) n += c;
  double p_sum = 0.0;
  for (const auto& row : counts) {
    double agree = 0.0;
    for (int c : row) agree += static_cast<double>(c) * (c - 1);
    p_sum += agree / (static_cast<double>(n) * (n - 1.0));
  }
  report.raw_agreement = p_sum / static_cast<double>(counts.size());
  return report;
}

}  // namespace valuekit
