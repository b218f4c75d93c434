#pragma once

#include <map>
#include <string>
#include <vector>

#include "valuekit/value_model.hpp"

namespace valuekit {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::map<int, ClassMetrics> per_class;  // keys -1, 0, +1
  double accuracy = 0.0;
  double mse = 0.0;
  std::map<ValueDimension, double> per_dimension_accuracy;
  std::map<ValueDimension, int> per_dimension_count;
  int total = 0;
};

// One scored sample: the dimension it was asked about, its integer label,
// and the model's scalar utility estimate.
struct PredictionRecord {
  ValueDimension dimension = ValueDimension::Achievement;
  int label = 0;
  double utility = 0.0;
};

// Predicted class from a utility: rounded half away from zero, clamped to
// [-1, +1].
int class_from_utility(double utility);

// Per-class precision/recall/F1 (0/0 counts as 0), overall accuracy, MSE of
// the raw utilities against the integer labels, and per-dimension accuracy.
EvalReport compute_eval_report(const std::vector<PredictionRecord>& records);

// Scores every sample with the model's utility estimate and reports.
EvalReport evaluate(const ValueModel& model,
                    const std::vector<AnnotatedSample>& samples);

// Text rendering: one row of F1/P/R per class plus Acc. and MSE, followed by
// a per-dimension accuracy row keyed by short code.
std::string format_report_text(const EvalReport& report,
                               std::string_view row_label = "model");

}  // namespace valuekit
