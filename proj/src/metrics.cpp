#include "valuekit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace valuekit {

int class_from_utility(double utility) {
  int cls = static_cast<int>(std::round(utility));  // half away from zero
  return std::clamp(cls, -1, 1);
}

EvalReport compute_eval_report(const std::vector<PredictionRecord>& records) {
  if (records.empty())
    throw InvalidInputError("compute_eval_report: no records");
  EvalReport report;
  report.total = static_cast<int>(records.size());

  std::map<int, int> tp, fp, fn;
  std::map<ValueDimension, int> dim_correct;
  int correct = 0;
  double squared_error = 0.0;
  for (const auto& rec : records) {
    if (rec.label < -1 || rec.label > 1)
      throw InvalidInputError("compute_eval_report: label outside {-1,0,1}");
    int predicted = class_from_utility(rec.utility);
    double diff = rec.utility - static_cast<double>(rec.label);
    squared_error += diff * diff;
    ++report.per_dimension_count[rec.dimension];
    if (predicted == rec.label) {
      ++correct;
      ++tp[rec.label];
      ++dim_correct[rec.dimension];
    } else {
      ++fp[predicted];
      ++fn[rec.label];
    }
  }
  report.accuracy = static_cast<double>(correct) / report.total;
  report.mse = squared_error / report.total;
  for (int cls : {-1, 0, 1}) {
    ClassMetrics m;
    int tp_c = tp[cls], fp_c = fp[cls], fn_c = fn[cls];
    m.precision = tp_c + fp_c > 0
                      ? static_cast<double>(tp_c) / (tp_c + fp_c)
                      : 0.0;
    m.recall = tp_c + fn_c > 0 ? static_cast<double>(tp_c) / (tp_c + fn_c)
                               : 0.0;
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    report.per_class[cls] = m;
  }
  for (const auto& [dim, count] : report.per_dimension_count)
    report.per_dimension_accuracy[dim] =
        static_cast<double>(dim_correct[dim]) / count;
  return report;
}

EvalReport evaluate(const ValueModel& model,
                    const std::vector<AnnotatedSample>& samples) {
  if (samples.empty()) throw InvalidInputError("evaluate: no samples");
  std::vector<PredictionRecord> records;
  records.reserve(samples.size());
  for (const auto& s : samples)
    records.push_back(
        {s.dimension, s.label,
         model.utility_estimate(s.scenario.text, s.dimension)});
  return compute_eval_report(records);
}

std::string format_report_text(const EvalReport& report,
                               std::string_view row_label) {
  char buf[64];
  std::ostringstream out;
  out << "            F1(-1)  F1(0)   F1(1)   P(-1)   P(0)    P(1)    "
         "R(-1)   R(0)    R(1)    Acc.    MSE\n";
  auto cell = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%-8.4f", v);
    out << buf;
  };
  std::snprintf(buf, sizeof(buf), "%-12.12s", std::string(row_label).c_str());
  out << buf;
  for (int cls : {-1, 0, 1}) cell(report.per_class.at(cls).f1);
  for (int cls : {-1, 0, 1}) cell(report.per_class.at(cls).precision);
  for (int cls : {-1, 0, 1}) cell(report.per_class.at(cls).recall);
  cell(report.accuracy);
  cell(report.mse);
  out << "\n\nAcc.        ";
  for (ValueDimension d : kAllDimensions) {
    std::snprintf(buf, sizeof(buf), "%-8.8s", std::string(dimension_code(d)).c_str());
    out << buf;
  }
  out << "\n            ";
  for (ValueDimension d : kAllDimensions) {
    auto it = report.per_dimension_accuracy.find(d);
    if (it == report.per_dimension_accuracy.end()) {
      std::snprintf(buf, sizeof(buf), "%-8.8s", "-");
      out << buf;
    } else {
      cell(it->second);
    }
  }
  out << "\n";
  return out.str();
}

}  // namespace valuekit
