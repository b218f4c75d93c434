#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "valuekit/core.hpp"
#include "valuekit/tokenizer.hpp"

namespace valuekit {

enum class ModelMode { Regression, Classification };

std::string_view mode_name(ModelMode m);

struct ModelConfig {
  ModelMode mode = ModelMode::Regression;
  std::uint32_t hash_dim = 1u << 18;
  std::uint32_t embed_dim = 32;
  TokenizerConfig tokenizer;
  std::uint64_t hash_seed = 0xcbf29ce484222325ULL;
  std::uint64_t init_seed = 42;

  void validate() const;
};

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 40;
  int batch_size = 32;
  double l2 = 0.0;  // penalty on head weights
  std::uint64_t seed = 42;

  void validate() const;
};

// Gradients of a batch loss. Feature and prompt blocks are sparse (only
// touched rows); head blocks mirror the model's head shapes.
struct SparseGradients {
  std::unordered_map<std::uint32_t, std::vector<double>> feature;
  std::map<int, std::vector<double>> prompt;
  std::vector<double> head_weights;
  std::vector<double> head_biases;
  double loss = 0.0;
};

// Hashed bag-of-n-grams linear value model. Scenario text is tokenized,
// n-grams are hashed into hash_dim buckets, and the pooled feature is the
// mean of the touched feature embeddings plus one per-dimension prompt
// embedding that conditions the shared model on the queried value.
// Regression mode maps a linear score through 2*sigmoid(z)-1; classification
// mode produces three class probabilities over labels {-1, 0, +1}.
class ValueModel {
 public:
  explicit ValueModel(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }

  struct Features {
    std::vector<std::uint32_t> indices;  // hashed n-grams, with multiplicity
    int prompt = 0;                      // canonical dimension index
  };
  Features featurize(const std::vector<std::string>& tokens,
                     ValueDimension d) const;
  Features featurize_text(std::string_view text, ValueDimension d) const;

  // Regression mode only; result strictly inside (-1, 1).
  Utility predict_utility(std::string_view text, ValueDimension d) const;

  // Classification mode only; probabilities over labels (-1, 0, +1).
  std::array<double, 3> class_probabilities(std::string_view text,
                                            ValueDimension d) const;

  // Mode-independent scalar estimate: the regression utility, or the
  // expected label under the class distribution.
  double utility_estimate(std::string_view text, ValueDimension d) const;

  ValueVector predict_vector(std::string_view text) const;

  // Minibatch SGD; returns one mean-loss entry per epoch.
  std::vector<double> train(const std::vector<AnnotatedSample>& samples,
                            const TrainConfig& config);

  double batch_loss(std::span<const AnnotatedSample> batch, double l2) const;
  SparseGradients batch_gradients(std::span<const AnnotatedSample> batch,
                                  double l2) const;
  void apply_gradients(const SparseGradients& grads, double learning_rate);

  void save(const std::filesystem::path& path) const;
  static ValueModel load(const std::filesystem::path& path);

  // Parameter blocks, exposed for tests and persistence.
  std::vector<double>& feature_embeddings() { return feature_embeddings_; }
  const std::vector<double>& feature_embeddings() const {
    return feature_embeddings_;
  }
  std::vector<double>& prompt_embeddings() { return prompt_embeddings_; }
  const std::vector<double>& prompt_embeddings() const {
    return prompt_embeddings_;
  }
  std::vector<double>& head_weights() { return head_weights_; }
  const std::vector<double>& head_weights() const { return head_weights_; }
  std::vector<double>& head_biases() { return head_biases_; }
  const std::vector<double>& head_biases() const { return head_biases_; }

 private:
  struct Pooled {
    std::vector<double> h;
  };
  Pooled pool(const Features& f) const;
  double regression_output(const Pooled& p) const;
  std::array<double, 3> class_probs(const Pooled& p) const;

  ModelConfig config_;
  std::vector<double> feature_embeddings_;  // hash_dim x embed_dim, row-major
  std::vector<double> prompt_embeddings_;   // 10 x embed_dim, row-major
  std::vector<double> head_weights_;  // embed_dim, or 3 x embed_dim row-major
  std::vector<double> head_biases_;   // 1, or 3
};

// 2*sigmoid(z)-1, clamped one ulp inside the open interval (-1, 1).
double sigmoid_to_unit(double z);

}  // namespace valuekit
