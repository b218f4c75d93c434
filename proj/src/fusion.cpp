#include "valuekit/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace valuekit {

FusionHead FusionHead::zeros(std::size_t text_dim, std::size_t num_classes) {
  FusionHead head;
  head.text_dim = text_dim;
  head.num_classes = num_classes;
  head.weights.assign(num_classes * (text_dim + kNumDimensions), 0.0);
  head.biases.assign(num_classes, 0.0);
  head.validate();
  return head;
}

void FusionHead::validate() const {
  if (num_classes < 2)
    throw InvalidInputError("fusion head needs at least 2 classes");
  const std::size_t input_dim = text_dim + kNumDimensions;
  if (weights.size() != num_classes * input_dim)
    throw InvalidInputError(
        "fusion head weight shape mismatch: expected " +
        std::to_string(num_classes * input_dim) + " values, got " +
        std::to_string(weights.size()));
  if (biases.size() != num_classes)
    throw InvalidInputError("fusion head bias shape mismatch");
}

std::vector<double> fuse_emotion_features(std::span<const double> text_features,
                                          const ValueVector& values,
                                          const FusionHead& head) {
  head.validate();
  if (text_features.size() != head.text_dim)
    throw InvalidInputError("text feature length " +
                            std::to_string(text_features.size()) +
                            " does not match fusion head text_dim " +
                            std::to_string(head.text_dim));
  const std::size_t input_dim = head.text_dim + kNumDimensions;
  std::vector<double> logits(head.num_classes);
  for (std::size_t c = 0; c < head.num_classes; ++c) {
    const double* w = head.weights.data() + c * input_dim;
    double z = head.biases[c];
    for (std::size_t k = 0; k < head.text_dim; ++k) z += w[k] * text_features[k];
    for (int k = 0; k < kNumDimensions; ++k)
      z += w[head.text_dim + static_cast<std::size_t>(k)] * values.at_index(k);
    logits[c] = z;
  }
  double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& z : logits) {
    z = std::exp(z - m);
    sum += z;
  }
  for (double& z : logits) z /= sum;
  return logits;
}

std::string prepend_label(std::string_view utterance, std::string_view label) {
  if (label.empty()) throw InvalidInputError("prepend label must be non-empty");
  std::string out;
  out.reserve(label.size() + 1 + utterance.size());
  out.append(label);
  out.push_back(' ');
  out.append(utterance);
  return out;
}

std::string prepend_labels(std::string_view utterance,
                           std::span<const std::string> labels) {
  std::string out(utterance);
  for (auto it = labels.rbegin(); it != labels.rend(); ++it)
    out = prepend_label(out, *it);
  return out;
}

}  // namespace valuekit
