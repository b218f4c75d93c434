#include "valuekit/value_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

#include "valuekit/rng.hpp"

namespace valuekit {

namespace {

// fastText's n-gram hash combiner.
constexpr std::uint64_t kNgramMultiplier = 116049371ULL;

constexpr char kMagic[4] = {'V', 'K', 'V', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

void append_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_f64(std::string& out, double v) {
  append_u64(out, std::bit_cast<std::uint64_t>(v));
}

class Reader {
 public:
  Reader(std::string data, std::string origin)
      : data_(std::move(data)), origin_(std::move(origin)) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  unsigned char byte() {
    need(1);
    return static_cast<unsigned char>(data_[pos_++]);
  }
  void bytes(char* dst, std::size_t n) {
    need(n);
    std::copy(data_.begin() + static_cast<long>(pos_),
              data_.begin() + static_cast<long>(pos_ + n), dst);
    pos_ += n;
  }
  bool at_end() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) {
    if (pos_ + n > data_.size())
      throw DecodeError(origin_ + ": truncated model file");
  }
  std::string data_;
  std::string origin_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view mode_name(ModelMode m) {
  return m == ModelMode::Regression ? "regression" : "classification";
}

void ModelConfig::validate() const {
  if (hash_dim < 1) throw InvalidInputError("hash_dim must be >= 1");
  if (embed_dim < 1) throw InvalidInputError("embed_dim must be >= 1");
  tokenizer.validate();
}

void TrainConfig::validate() const {
  if (learning_rate < 0.0 || !std::isfinite(learning_rate))
    throw InvalidInputError("learning rate must be finite and >= 0");
  if (epochs < 1) throw InvalidInputError("epochs must be >= 1");
  if (batch_size < 1) throw InvalidInputError("batch size must be >= 1");
  if (l2 < 0.0) throw InvalidInputError("l2 penalty must be >= 0");
}

double sigmoid_to_unit(double z) {
  double u = 2.0 / (1.0 + std::exp(-z)) - 1.0;
  return std::clamp(u, std::nextafter(-1.0, 0.0), std::nextafter(1.0, 0.0));
}

ValueModel::ValueModel(const ModelConfig& config) : config_(config) {
  config_.validate();
  const std::size_t de = config_.embed_dim;
  feature_embeddings_.resize(static_cast<std::size_t>(config_.hash_dim) * de);
  prompt_embeddings_.resize(static_cast<std::size_t>(kNumDimensions) * de);
  const double scale = 1.0 / std::sqrt(static_cast<double>(de));
  std::mt19937_64 rng(config_.init_seed);
  for (double& v : feature_embeddings_)
    v = (2.0 * unit_real(rng) - 1.0) * scale;
  for (double& v : prompt_embeddings_) v = (2.0 * unit_real(rng) - 1.0) * scale;
  if (config_.mode == ModelMode::Regression) {
    head_weights_.assign(de, 0.0);
    head_biases_.assign(1, 0.0);
  } else {
    head_weights_.assign(3 * de, 0.0);
    head_biases_.assign(3, 0.0);
  }
}

ValueModel::Features ValueModel::featurize(
    const std::vector<std::string>& tokens, ValueDimension d) const {
  Features f;
  f.prompt = static_cast<int>(d);
  std::vector<std::uint64_t> token_hashes;
  token_hashes.reserve(tokens.size());
  for (const auto& t : tokens)
    token_hashes.push_back(fnv1a64(t, config_.hash_seed));
  const int max_order = config_.tokenizer.ngram_order;
  for (std::size_t i = 0; i < token_hashes.size(); ++i) {
    std::uint64_t h = token_hashes[i];
    f.indices.push_back(static_cast<std::uint32_t>(h % config_.hash_dim));
    for (int order = 2; order <= max_order; ++order) {
      std::size_t j = i + static_cast<std::size_t>(order) - 1;
      if (j >= token_hashes.size()) break;
      h = h * kNgramMultiplier + token_hashes[j];
      f.indices.push_back(static_cast<std::uint32_t>(h % config_.hash_dim));
    }
  }
  return f;
}

ValueModel::Features ValueModel::featurize_text(std::string_view text,
                                                ValueDimension d) const {
  return featurize(tokenize(text, config_.tokenizer), d);
}

ValueModel::Pooled ValueModel::pool(const Features& f) const {
  const std::size_t de = config_.embed_dim;
  Pooled p;
  p.h.assign(de, 0.0);
  for (std::uint32_t idx : f.indices) {
    const double* row = feature_embeddings_.data() +
                        static_cast<std::size_t>(idx) * de;
    for (std::size_t k = 0; k < de; ++k) p.h[k] += row[k];
  }
  const double* prompt =
      prompt_embeddings_.data() + static_cast<std::size_t>(f.prompt) * de;
  for (std::size_t k = 0; k < de; ++k) p.h[k] += prompt[k];
  const double denom = static_cast<double>(f.indices.size() + 1);
  for (double& v : p.h) v /= denom;
  return p;
}

double ValueModel::regression_output(const Pooled& p) const {
  double z = head_biases_[0];
  for (std::size_t k = 0; k < p.h.size(); ++k) z += head_weights_[k] * p.h[k];
  return sigmoid_to_unit(z);
}

std::array<double, 3> ValueModel::class_probs(const Pooled& p) const {
  const std::size_t de = config_.embed_dim;
  std::array<double, 3> logits;
  for (int c = 0; c < 3; ++c) {
    double z = head_biases_[static_cast<std::size_t>(c)];
    const double* w = head_weights_.data() + static_cast<std::size_t>(c) * de;
    for (std::size_t k = 0; k < de; ++k) z += w[k] * p.h[k];
    logits[static_cast<std::size_t>(c)] = z;
  }
  double m = std::max({logits[0], logits[1], logits[2]});
  std::array<double, 3> probs;
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    probs[c] = std::exp(logits[c] - m);
    sum += probs[c];
  }
  for (double& v : probs) v /= sum;
  return probs;
}

Utility ValueModel::predict_utility(std::string_view text,
                                    ValueDimension d) const {
  if (config_.mode != ModelMode::Regression)
    throw ModeMismatchError(
        "predict_utility requires a regression-mode model");
  return Utility(regression_output(pool(featurize_text(text, d))));
}

std::array<double, 3> ValueModel::class_probabilities(std::string_view text,
                                                      ValueDimension d) const {
  if (config_.mode != ModelMode::Classification)
    throw ModeMismatchError(
        "class_probabilities requires a classification-mode model");
  return class_probs(pool(featurize_text(text, d)));
}

double ValueModel::utility_estimate(std::string_view text,
                                    ValueDimension d) const {
  if (config_.mode == ModelMode::Regression)
    return predict_utility(text, d).value;
  auto probs = class_probabilities(text, d);
  return probs[2] - probs[0];  // expected label over (-1, 0, +1)
}

ValueVector ValueModel::predict_vector(std::string_view text) const {
  // Feature indices do not depend on the queried dimension, so hash once and
  // swap the prompt row per dimension; accumulation order matches pool() so
  // the result is bit-identical to ten independent predictions.
  const auto tokens = tokenize(text, config_.tokenizer);
  ValueVector out;
  for (ValueDimension d : kAllDimensions) {
    Pooled p = pool(featurize(tokens, d));
    double u;
    if (config_.mode == ModelMode::Regression) {
      u = regression_output(p);
    } else {
      auto probs = class_probs(p);
      u = probs[2] - probs[0];
    }
    out.set(d, u);
  }
  return out;
}

double ValueModel::batch_loss(std::span<const AnnotatedSample> batch,
                              double l2) const {
  if (batch.empty()) throw InvalidInputError("batch_loss: empty batch");
  double sum = 0.0;
  for (const auto& s : batch) {
    Pooled p = pool(featurize_text(s.scenario.text, s.dimension));
    if (config_.mode == ModelMode::Regression) {
      double u = regression_output(p);
      double d = u - static_cast<double>(s.label);
      sum += d * d;
    } else {
      auto probs = class_probs(p);
      int cls = s.label + 1;
      sum += -std::log(probs[static_cast<std::size_t>(cls)]);
    }
  }
  double loss = sum / static_cast<double>(batch.size());
  if (l2 > 0.0) {
    double w2 = 0.0;
    for (double w : head_weights_) w2 += w * w;
    loss += 0.5 * l2 * w2;
  }
  return loss;
}

SparseGradients ValueModel::batch_gradients(
    std::span<const AnnotatedSample> batch, double l2) const {
  if (batch.empty()) throw InvalidInputError("batch_gradients: empty batch");
  const std::size_t de = config_.embed_dim;
  SparseGradients g;
  g.head_weights.assign(head_weights_.size(), 0.0);
  g.head_biases.assign(head_biases_.size(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  double loss_sum = 0.0;
  for (const auto& s : batch) {
    if (s.label < -1 || s.label > 1)
      throw InvalidInputError("train label outside {-1,0,1} for id \"" +
                              s.scenario.id + "\"");
    Features f = featurize_text(s.scenario.text, s.dimension);
    Pooled p = pool(f);
    std::vector<double> grad_h(de, 0.0);
    if (config_.mode == ModelMode::Regression) {
      double u = regression_output(p);
      double diff = u - static_cast<double>(s.label);
      loss_sum += diff * diff;
      // d(loss_mean)/dz = (2*diff/B) * (1-u^2)/2
      double gz = inv_b * diff * (1.0 - u * u);
      for (std::size_t k = 0; k < de; ++k) {
        g.head_weights[k] += gz * p.h[k];
        grad_h[k] = gz * head_weights_[k];
      }
      g.head_biases[0] += gz;
    } else {
      auto probs = class_probs(p);
      int cls = s.label + 1;
      loss_sum += -std::log(probs[static_cast<std::size_t>(cls)]);
      for (int c = 0; c < 3; ++c) {
        double gl = inv_b * (probs[static_cast<std::size_t>(c)] -
                             (c == cls ? 1.0 : 0.0));
        double* gw = g.head_weights.data() + static_cast<std::size_t>(c) * de;
        const double* w =
            head_weights_.data() + static_cast<std::size_t>(c) * de;
        for (std::size_t k = 0; k < de; ++k) {
          gw[k] += gl * p.h[k];
          grad_h[k] += gl * w[k];
        }
        g.head_biases[static_cast<std::size_t>(c)] += gl;
      }
    }
    const double inv_count = 1.0 / static_cast<double>(f.indices.size() + 1);
    for (std::uint32_t idx : f.indices) {
      auto& row = g.feature[idx];
      if (row.empty()) row.assign(de, 0.0);
      for (std::size_t k = 0; k < de; ++k) row[k] += grad_h[k] * inv_count;
    }
    auto& prow = g.prompt[f.prompt];
    if (prow.empty()) prow.assign(de, 0.0);
    for (std::size_t k = 0; k < de; ++k) prow[k] += grad_h[k] * inv_count;
  }

  g.loss = loss_sum * inv_b;
  if (l2 > 0.0) {
    double w2 = 0.0;
    for (std::size_t k = 0; k < head_weights_.size(); ++k) {
      g.head_weights[k] += l2 * head_weights_[k];
      w2 += head_weights_[k] * head_weights_[k];
    }
    g.loss += 0.5 * l2 * w2;
  }
  return g;
}

void ValueModel::apply_gradients(const SparseGradients& grads,
                                 double learning_rate) {
  const std::size_t de = config_.embed_dim;
  for (const auto& [idx, row] : grads.feature) {
    double* dst = feature_embeddings_.data() + static_cast<std::size_t>(idx) * de;
    for (std::size_t k = 0; k < de; ++k) dst[k] -= learning_rate * row[k];
  }
  for (const auto& [dim, row] : grads.prompt) {
    double* dst = prompt_embeddings_.data() + static_cast<std::size_t>(dim) * de;
    for (std::size_t k = 0; k < de; ++k) dst[k] -= learning_rate * row[k];
  }
  for (std::size_t k = 0; k < head_weights_.size(); ++k)
    head_weights_[k] -= learning_rate * grads.head_weights[k];
  for (std::size_t k = 0; k < head_biases_.size(); ++k)
    head_biases_[k] -= learning_rate * grads.head_biases[k];
}

std::vector<double> ValueModel::train(
    const std::vector<AnnotatedSample>& samples, const TrainConfig& config) {
  config.validate();
  if (samples.empty())
    throw InvalidInputError("train: sample set must be non-empty");

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(config.epochs));
  std::vector<AnnotatedSample> batch;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    deterministic_shuffle(order, rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      std::size_t end = std::min(
          order.size(), start + static_cast<std::size_t>(config.batch_size));
      // The shuffle decides batch membership only; gradients accumulate in
      // ascending sample order so summation order is canonical.
      std::vector<std::size_t> members(order.begin() + static_cast<long>(start),
                                       order.begin() + static_cast<long>(end));
      std::sort(members.begin(), members.end());
      batch.clear();
      for (std::size_t i : members) batch.push_back(samples[i]);
      SparseGradients grads = batch_gradients(batch, config.l2);
      epoch_loss += grads.loss * static_cast<double>(batch.size());
      apply_gradients(grads, config.learning_rate);
    }
    epoch_loss /= static_cast<double>(samples.size());
    if (!std::isfinite(epoch_loss))
      throw DivergenceError("training diverged at epoch " +
                            std::to_string(epoch));
    trace.push_back(epoch_loss);
  }
  return trace;
}

void ValueModel::save(const std::filesystem::path& path) const {
  std::string out;
  out.append(kMagic, 4);
  append_u32(out, kFormatVersion);
  out.push_back(config_.mode == ModelMode::Regression ? 0 : 1);
  out.push_back(config_.tokenizer.lowercase ? 1 : 0);
  append_u32(out, static_cast<std::uint32_t>(config_.tokenizer.ngram_order));
  append_u32(out, config_.hash_dim);
  append_u32(out, config_.embed_dim);
  append_u64(out, config_.hash_seed);
  append_u64(out, config_.init_seed);
  for (double v : feature_embeddings_) append_f64(out, v);
  for (double v : prompt_embeddings_) append_f64(out, v);
  for (double v : head_weights_) append_f64(out, v);
  for (double v : head_biases_) append_f64(out, v);

  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open model file for writing: " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error("failed writing model file: " + path.string());
}

ValueModel ValueModel::load(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open model file: " + path.string());
  std::string data((std::istreambuf_iterator<char>(file)),
                   std::istreambuf_iterator<char>());
  Reader r(std::move(data), path.string());

  char magic[4];
  r.bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic))
    throw DecodeError(path.string() + ": not a value-model file");
  std::uint32_t version = r.u32();
  if (version != kFormatVersion)
    throw DecodeError(path.string() + ": unsupported model format version " +
                      std::to_string(version) + " (expected " +
                      std::to_string(kFormatVersion) + ")");

  ModelConfig config;
  config.mode = r.byte() == 0 ? ModelMode::Regression : ModelMode::Classification;
  config.tokenizer.lowercase = r.byte() != 0;
  config.tokenizer.ngram_order = static_cast<int>(r.u32());
  config.hash_dim = r.u32();
  config.embed_dim = r.u32();
  config.hash_seed = r.u64();
  config.init_seed = r.u64();

  ValueModel model(config);
  for (double& v : model.feature_embeddings_) v = r.f64();
  for (double& v : model.prompt_embeddings_) v = r.f64();
  for (double& v : model.head_weights_) v = r.f64();
  for (double& v : model.head_biases_) v = r.f64();
  if (!r.at_end())
    throw DecodeError(path.string() + ": trailing bytes after model payload");
  return model;
}

}  // namespace valuekit
