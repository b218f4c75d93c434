#include <doctest.h>

#include <cmath>
#include <random>

#include "valuekit/fusion.hpp"
#include "valuekit/metrics.hpp"
#include "valuekit/rng.hpp"

using namespace valuekit;

TEST_CASE("class_from_utility rounds half away from zero and clamps") {
  CHECK(class_from_utility(0.0) == 0);
  CHECK(class_from_utility(0.49) == 0);
  CHECK(class_from_utility(-0.49) == 0);
  CHECK(class_from_utility(0.5) == 1);
  CHECK(class_from_utility(-0.5) == -1);
  CHECK(class_from_utility(0.51) == 1);
  CHECK(class_from_utility(-0.51) == -1);
  CHECK(class_from_utility(1.0) == 1);
  CHECK(class_from_utility(-1.0) == -1);
  CHECK(class_from_utility(1.7) == 1);
  CHECK(class_from_utility(-2.3) == -1);
  // Property over a grid: the three bands are exactly as specified.
  for (int i = -100; i <= 100; ++i) {
    double u = i / 100.0;
    int expected = u >= 0.5 ? 1 : (u <= -0.5 ? -1 : 0);
    CHECK(class_from_utility(u) == expected);
  }
}

TEST_CASE("perfect predictions") {
  std::vector<PredictionRecord> records;
  for (int label : {-1, 0, 1, 1, 0, -1})
    records.push_back({ValueDimension::Power, label,
                       static_cast<double>(label)});
  EvalReport report = compute_eval_report(records);
  CHECK(report.accuracy == 1.0);
  CHECK(report.mse == 0.0);
  for (int cls : {-1, 0, 1}) {
    CHECK(report.per_class.at(cls).precision == 1.0);
    CHECK(report.per_class.at(cls).recall == 1.0);
    CHECK(report.per_class.at(cls).f1 == 1.0);
  }
  CHECK(report.per_dimension_accuracy.at(ValueDimension::Power) == 1.0);
}

TEST_CASE("hand-computed confusion fixture, exact arithmetic") {
  // Ten samples: class +1 sees TP=3, FP=1, FN=2; utilities chosen so every
  // squared error is an exact binary fraction.
  std::vector<PredictionRecord> records;
  for (int i = 0; i < 3; ++i)
    records.push_back({ValueDimension::Achievement, 1, 1.0});     // TP(+1)
  for (int i = 0; i < 2; ++i)
    records.push_back({ValueDimension::Achievement, 1, 0.25});    // FN(+1)
  records.push_back({ValueDimension::Achievement, 0, 0.75});      // FP(+1)
  for (int i = 0; i < 3; ++i)
    records.push_back({ValueDimension::Achievement, 0, 0.0});     // TP(0)
  records.push_back({ValueDimension::Achievement, -1, -1.0});     // TP(-1)

  EvalReport report = compute_eval_report(records);
  CHECK(report.total == 10);
  CHECK(report.accuracy == 7.0 / 10.0);

  const ClassMetrics& pos = report.per_class.at(1);
  CHECK(pos.precision == 3.0 / 4.0);
  CHECK(pos.recall == 3.0 / 5.0);
  CHECK(pos.f1 == 2.0 * (3.0 / 4.0) * (3.0 / 5.0) / (3.0 / 4.0 + 3.0 / 5.0));

  const ClassMetrics& neu = report.per_class.at(0);
  CHECK(neu.precision == 3.0 / 5.0);
  CHECK(neu.recall == 3.0 / 4.0);

  const ClassMetrics& neg = report.per_class.at(-1);
  CHECK(neg.precision == 1.0);
  CHECK(neg.recall == 1.0);
  CHECK(neg.f1 == 1.0);

  // errors: 2 * 0.75^2 + 0.75^2 = 3 * 0.5625
  CHECK(report.mse == (3.0 * 0.5625) / 10.0);
  CHECK(report.per_dimension_accuracy.at(ValueDimension::Achievement) ==
        7.0 / 10.0);
}

TEST_CASE("f1 is zero when precision and recall are both zero") {
  std::vector<PredictionRecord> records = {
      {ValueDimension::Power, 1, -1.0},  // label +1 predicted -1
      {ValueDimension::Power, -1, 1.0},  // label -1 predicted +1
  };
  EvalReport report = compute_eval_report(records);
  CHECK(report.per_class.at(0).precision == 0.0);
  CHECK(report.per_class.at(0).recall == 0.0);
  CHECK(report.per_class.at(0).f1 == 0.0);
  CHECK(report.accuracy == 0.0);
}

TEST_CASE("constant-zero predictor MSE equals the nonzero-label fraction") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(bounded_rand(rng, 200));
    std::vector<PredictionRecord> records;
    int nonzero = 0;
    for (int i = 0; i < n; ++i) {
      int label = static_cast<int>(bounded_rand(rng, 3)) - 1;
      if (label != 0) ++nonzero;
      records.push_back({kAllDimensions[bounded_rand(rng, 10)], label, 0.0});
    }
    EvalReport report = compute_eval_report(records);
    CHECK(report.mse == static_cast<double>(nonzero) / n);
  }
}

TEST_CASE("accuracy equals the support-weighted recall sum") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(bounded_rand(rng, 300));
    std::vector<PredictionRecord> records;
    std::map<int, int> support;
    for (int i = 0; i < n; ++i) {
      int label = static_cast<int>(bounded_rand(rng, 3)) - 1;
      double utility = (static_cast<int>(bounded_rand(rng, 3)) - 1) * 0.9;
      ++support[label];
      records.push_back({kAllDimensions[bounded_rand(rng, 10)], label, utility});
    }
    EvalReport report = compute_eval_report(records);
    double weighted = 0.0;
    for (int cls : {-1, 0, 1})
      weighted += report.per_class.at(cls).recall * support[cls];
    CHECK(report.accuracy == doctest::Approx(weighted / n).epsilon(1e-12));
  }
}

TEST_CASE("report text mirrors the metric table layout") {
  std::vector<PredictionRecord> records = {
      {ValueDimension::Power, 1, 1.0},
      {ValueDimension::Security, 0, 0.0},
  };
  std::string text = format_report_text(compute_eval_report(records));
  for (const char* column : {"F1(-1)", "F1(0)", "F1(1)", "P(-1)", "P(0)",
                             "P(1)", "R(-1)", "R(0)", "R(1)", "Acc.", "MSE"})
    CHECK(text.find(column) != std::string::npos);
  for (const char* code : {"ACH", "BEN", "CON", "HED", "POW", "SEC", "SD",
                           "STI", "TRA", "UNI"})
    CHECK(text.find(code) != std::string::npos);
}

// --- fusion ---------------------------------------------------------------------

TEST_CASE("fuse_emotion_features") {
  SUBCASE("zero head gives the uniform distribution") {
    FusionHead head = FusionHead::zeros(4, 32);
    std::vector<double> text(4, 0.3);
    ValueVector values;
    auto probs = fuse_emotion_features(text, values, head);
    REQUIRE(probs.size() == 32);
    for (double p : probs) CHECK(p == doctest::Approx(1.0 / 32).epsilon(1e-12));
  }
  SUBCASE("distributions normalize over random heads") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 1000; ++trial) {
      std::size_t text_dim = 1 + bounded_rand(rng, 6);
      std::size_t classes = 2 + bounded_rand(rng, 6);
      FusionHead head = FusionHead::zeros(text_dim, classes);
      for (double& w : head.weights) w = 4.0 * (unit_real(rng) - 0.5);
      for (double& b : head.biases) b = 4.0 * (unit_real(rng) - 0.5);
      std::vector<double> text(text_dim);
      for (double& v : text) v = 4.0 * (unit_real(rng) - 0.5);
      ValueVector values;
      for (ValueDimension d : kAllDimensions)
        values.set(d, 2.0 * unit_real(rng) - 1.0);
      auto probs = fuse_emotion_features(text, values, head);
      double sum = 0.0;
      for (double p : probs) {
        CHECK(p > 0.0);
        sum += p;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
  }
  SUBCASE("zeroing the value columns reproduces the text-only model") {
    std::mt19937_64 rng(99);
    FusionHead fused = FusionHead::zeros(3, 5);
    for (double& w : fused.weights) w = unit_real(rng) - 0.5;
    for (double& b : fused.biases) b = unit_real(rng) - 0.5;
    // Text-only head: same text columns and biases, value columns zero.
    FusionHead text_only = fused;
    const std::size_t input_dim = 3 + kNumDimensions;
    for (std::size_t c = 0; c < 5; ++c)
      for (std::size_t k = 3; k < input_dim; ++k)
        text_only.weights[c * input_dim + k] = 0.0;

    std::vector<double> text = {0.5, -0.25, 1.0};
    ValueVector values;
    for (ValueDimension d : kAllDimensions) values.set(d, unit_real(rng) - 0.5);
    ValueVector zero;
    auto with_zeroed_columns = fuse_emotion_features(text, values, text_only);
    auto text_only_output = fuse_emotion_features(text, zero, fused);
    REQUIRE(with_zeroed_columns.size() == text_only_output.size());
    for (std::size_t i = 0; i < with_zeroed_columns.size(); ++i)
      CHECK(with_zeroed_columns[i] == text_only_output[i]);
  }
  SUBCASE("dimension mismatch is rejected") {
    FusionHead head = FusionHead::zeros(4, 3);
    std::vector<double> wrong(5, 0.0);
    CHECK_THROWS_AS(fuse_emotion_features(wrong, ValueVector{}, head),
                    InvalidInputError);
    head.weights.pop_back();
    std::vector<double> right(4, 0.0);
    CHECK_THROWS_AS(fuse_emotion_features(right, ValueVector{}, head),
                    InvalidInputError);
  }
}

TEST_CASE("prepend_label") {
  CHECK(prepend_label("I finally got promoted!", "proud") ==
        "proud I finally got promoted!");
  CHECK(prepend_label("", "proud") == "proud ");
  CHECK_THROWS_AS(prepend_label("text", ""), InvalidInputError);
  std::vector<std::string> labels = {"a", "b"};
  CHECK(prepend_labels("utterance", labels) == "a b utterance");
}
