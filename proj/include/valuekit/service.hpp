#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "valuekit/value_model.hpp"

namespace valuekit {

struct ServeConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 binds an ephemeral port
  std::filesystem::path model_path;
  std::size_t max_body_bytes = 64 * 1024;
  int concurrency = 8;

  void validate() const;
};

// Stateless JSON-over-HTTP scoring service around one immutable model.
//
//   POST /v1/score    {texts: [...]}                  -> {vectors: [[...], ...]}
//   POST /v1/reward   {persona: [...], utterances: [...], clamp_terms?}
//                                                     -> {R, trace: [...]}
//   POST /v1/profile  {utterances: [...]}             -> {profile, per_utterance}
//   GET  /v1/health                                   -> {status, model_checksum,
//                                                         dimensions}
//
// Bodies are strict: unknown fields are rejected with a structured error
// {code, message, field?}. An optional schema_version field must equal 1.
class ValueService {
 public:
  explicit ValueService(const ServeConfig& config);  // loads the model eagerly
  ~ValueService();

  ValueService(const ValueService&) = delete;
  ValueService& operator=(const ValueService&) = delete;

  // Binds and serves on a background thread; returns the bound port.
  int start();
  // Serves on the calling thread until stop() or a signal handler stops it.
  void run();
  void stop();

  const ValueModel& model() const { return *model_; }
  const std::string& model_checksum() const { return checksum_; }

  // Response builders shared by the handlers and by in-process callers, so
  // service output can be compared byte-for-byte with library output.
  static nlohmann::json score_response(const ValueModel& model,
                                       const std::vector<std::string>& texts);
  static nlohmann::json reward_response(const ValueModel& model,
                                        const std::vector<std::string>& persona,
                                        const std::vector<std::string>& utterances,
                                        bool clamp_terms);
  static nlohmann::json profile_response(
      const ValueModel& model, const std::vector<std::string>& utterances);
  nlohmann::json health_response() const;

 private:
  struct Impl;
  void configure_routes();

  ServeConfig config_;
  std::unique_ptr<ValueModel> model_;
  std::string checksum_;
  std::unique_ptr<Impl> impl_;
  std::thread serve_thread_;
};

}  // namespace valuekit
