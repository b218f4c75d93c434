#pragma once

#include <span>
#include <string>
#include <vector>

#include "valuekit/core.hpp"

namespace valuekit {

// Affine-plus-softmax head over the concatenation of a text feature vector
// and a ten-dimensional value vector.
struct FusionHead {
  std::size_t text_dim = 0;
  std::size_t num_classes = 0;
  std::vector<double> weights;  // num_classes x (text_dim + 10), row-major
  std::vector<double> biases;   // num_classes

  static FusionHead zeros(std::size_t text_dim, std::size_t num_classes);
  void validate() const;
};

// softmax(W [h; v] + b). Output sums to 1 within 1e-9 with all components
// positive. Dimension mismatches are rejected.
std::vector<double> fuse_emotion_features(std::span<const double> text_features,
                                          const ValueVector& values,
                                          const FusionHead& head);

// label + single space + utterance.
std::string prepend_label(std::string_view utterance, std::string_view label);

// Iterated prepend: labels [a, b] yield "a b utterance".
std::string prepend_labels(std::string_view utterance,
                           std::span<const std::string> labels);

}  // namespace valuekit
