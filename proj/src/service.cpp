#include "valuekit/service.hpp"

#include <httplib.h>

#include <optional>
#include <set>

#include "valuekit/json_support.hpp"
#include "valuekit/reward.hpp"

namespace valuekit {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;
constexpr std::size_t kMaxBatch = 256;

struct RequestError {
  int status;
  std::string code;
  std::string message;
  std::string field;  // optional
};

json error_body(const RequestError& err) {
  json j = {{"code", err.code}, {"message", err.message}};
  if (!err.field.empty()) j["field"] = err.field;
  return j;
}

void send_error(httplib::Response& res, const RequestError& err) {
  res.status = err.status;
  res.set_content(error_body(err).dump(), "application/json");
}

void send_json(httplib::Response& res, const json& body) {
  res.status = 200;
  res.set_content(body.dump(), "application/json");
}

// Parses a strict JSON object body: every present field must be in
// `allowed`, every name in `required` must be present, and schema_version
// (always allowed) must equal 1 when given.
json parse_strict_body(const std::string& body,
                       const std::set<std::string>& allowed,
                       const std::vector<std::string>& required) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded())
    throw RequestError{400, "invalid_json", "request body is not valid JSON",
                       ""};
  if (!j.is_object())
    throw RequestError{400, "invalid_json", "request body must be a JSON "
                                            "object", ""};
  for (const auto& [key, value] : j.items()) {
    if (key == "schema_version") {
      if (!value.is_number_integer() || value.get<int>() != kSchemaVersion)
        throw RequestError{400, "unsupported_schema_version",
                           "schema_version must be " +
                               std::to_string(kSchemaVersion),
                           "schema_version"};
      continue;
    }
    if (!allowed.count(key))
      throw RequestError{400, "unknown_field", "unknown field \"" + key + "\"",
                         key};
  }
  for (const auto& name : required) {
    if (!j.contains(name))
      throw RequestError{400, "missing_field",
                         "missing required field \"" + name + "\"", name};
  }
  return j;
}

std::vector<std::string> string_array(const json& j, const std::string& field,
                                      std::size_t min_size,
                                      std::size_t max_size) {
  const json& arr = j.at(field);
  if (!arr.is_array())
    throw RequestError{400, "invalid_field",
                       "field \"" + field + "\" must be an array", field};
  if (arr.size() < min_size)
    throw RequestError{400, "empty_batch",
                       "field \"" + field + "\" must have at least " +
                           std::to_string(min_size) + " entries",
                       field};
  if (arr.size() > max_size)
    throw RequestError{400, "batch_too_large",
                       "field \"" + field + "\" exceeds the limit of " +
                           std::to_string(max_size) + " entries",
                       field};
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string())
      throw RequestError{400, "invalid_field",
                         "field \"" + field + "[" + std::to_string(i) +
                             "]\" must be a string",
                         field + "[" + std::to_string(i) + "]"};
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

}  // namespace

struct ValueService::Impl {
  httplib::Server server;
};

void ServeConfig::validate() const {
  if (port < 0 || port > 65535)
    throw InvalidInputError("serve port out of range: " + std::to_string(port));
  if (model_path.empty())
    throw InvalidInputError("serve requires a model file path");
  if (concurrency < 1)
    throw InvalidInputError("serve concurrency must be >= 1");
  if (max_body_bytes < 1)
    throw InvalidInputError("serve request size limit must be >= 1 byte");
}

ValueService::ValueService(const ServeConfig& config)
    : config_(config), impl_(std::make_unique<Impl>()) {
  config_.validate();
  model_ = std::make_unique<ValueModel>(ValueModel::load(config_.model_path));
  checksum_ = file_checksum(config_.model_path);
  configure_routes();
}

ValueService::~ValueService() { stop(); }

json ValueService::score_response(const ValueModel& model,
                                  const std::vector<std::string>& texts) {
  json vectors = json::array();
  for (const auto& text : texts)
    vectors.push_back(value_vector_to_json(model.predict_vector(text)));
  return json{{"schema_version", kSchemaVersion}, {"vectors", vectors}};
}

json ValueService::reward_response(const ValueModel& model,
                                   const std::vector<std::string>& persona,
                                   const std::vector<std::string>& utterances,
                                   bool clamp_terms) {
  RewardOutcome outcome = reward(
      persona, utterances,
      [&model](const std::string& text) { return model.predict_vector(text); },
      clamp_terms);
  json trace = json::array();
  for (std::size_t t = 0; t < outcome.match.r.size(); ++t) {
    int m = outcome.match.m[t];
    int gamma = m == kNoMatch
                    ? outcome.match.gamma_unmatched
                    : outcome.match.gamma[static_cast<std::size_t>(m - 1)];
    json turn = {{"turn", t + 1},
                 {"utterance", outcome.trace.utterances[t]},
                 {"r", outcome.match.r[t]},
                 {"gamma", gamma},
                 {"term", outcome.match.terms[t]}};
    if (m == kNoMatch)
      turn["m"] = nullptr;
    else
      turn["m"] = m;
    trace.push_back(std::move(turn));
  }
  return json{{"schema_version", kSchemaVersion},
              {"R", outcome.match.reward},
              {"clamp_terms", clamp_terms},
              {"trace", trace}};
}

json ValueService::profile_response(const ValueModel& model,
                                    const std::vector<std::string>& utterances) {
  SpeakerProfile profile = profile_speaker(
      utterances,
      [&model](const std::string& text) { return model.predict_vector(text); });
  json per_utterance = json::array();
  for (const auto& v : profile.per_utterance)
    per_utterance.push_back(value_vector_to_json(v));
  return json{{"schema_version", kSchemaVersion},
              {"profile", value_vector_to_json(profile.profile)},
              {"per_utterance", per_utterance}};
}

json ValueService::health_response() const {
  json dims = json::array();
  for (ValueDimension d : kAllDimensions)
    dims.push_back(std::string(dimension_code(d)));
  return json{{"schema_version", kSchemaVersion},
              {"status", "ok"},
              {"model_checksum", checksum_},
              {"dimensions", dims}};
}

void ValueService::configure_routes() {
  auto& server = impl_->server;
  const std::size_t max_body = config_.max_body_bytes;
  server.set_payload_max_length(max_body * 4 + 4096);
  server.new_task_queue = [n = config_.concurrency] {
    return new httplib::ThreadPool(static_cast<std::size_t>(n));
  };

  auto guarded = [this, max_body](
                     auto handler) {
    return [this, max_body, handler](const httplib::Request& req,
                                     httplib::Response& res) {
      try {
        if (req.body.size() > max_body)
          throw RequestError{413, "oversize",
                             "request body exceeds the limit of " +
                                 std::to_string(max_body) + " bytes",
                             ""};
        if (model_ == nullptr)
          throw RequestError{503, "model_unavailable", "no model is loaded",
                             ""};
        handler(req, res);
      } catch (const RequestError& err) {
        send_error(res, err);
      } catch (const RewardOverflowError& e) {
        send_error(res, {422, "term_overflow", e.what(), ""});
      } catch (const InvalidInputError& e) {
        send_error(res, {400, "invalid_input", e.what(), ""});
      } catch (const std::exception& e) {
        send_error(res, {500, "internal_error", e.what(), ""});
      }
    };
  };

  server.Post("/v1/score",
              guarded([this](const httplib::Request& req,
                             httplib::Response& res) {
                json j = parse_strict_body(req.body, {"texts"}, {"texts"});
                auto texts = string_array(j, "texts", 1, kMaxBatch);
                send_json(res, score_response(*model_, texts));
              }));

  server.Post(
      "/v1/reward",
      guarded([this](const httplib::Request& req, httplib::Response& res) {
        json j = parse_strict_body(
            req.body, {"persona", "utterances", "clamp_terms"},
            {"persona", "utterances"});
        auto persona = string_array(j, "persona", 1, kMaxBatch);
        auto utterances = string_array(j, "utterances", 1, kMaxBatch);
        bool clamp = false;
        if (j.contains("clamp_terms")) {
          if (!j["clamp_terms"].is_boolean())
            throw RequestError{400, "invalid_field",
                               "field \"clamp_terms\" must be a boolean",
                               "clamp_terms"};
          clamp = j["clamp_terms"].get<bool>();
        }
        send_json(res, reward_response(*model_, persona, utterances, clamp));
      }));

  server.Post("/v1/profile",
              guarded([this](const httplib::Request& req,
                             httplib::Response& res) {
                json j = parse_strict_body(req.body, {"utterances"},
                                           {"utterances"});
                auto utterances = string_array(j, "utterances", 1, kMaxBatch);
                send_json(res, profile_response(*model_, utterances));
              }));

  server.Get("/v1/health",
             guarded([this](const httplib::Request&, httplib::Response& res) {
               send_json(res, health_response());
             }));
}

int ValueService::start() {
  auto& server = impl_->server;
  int port = config_.port;
  if (port == 0) {
    port = server.bind_to_any_port(config_.host);
    if (port < 0) throw Error("failed to bind " + config_.host);
  } else {
    if (!server.bind_to_port(config_.host, port))
      throw Error("failed to bind " + config_.host + ":" +
                  std::to_string(port));
  }
  serve_thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void ValueService::run() {
  auto& server = impl_->server;
  if (!server.listen(config_.host, config_.port))
    throw Error("failed to serve on " + config_.host + ":" +
                std::to_string(config_.port));
}

void ValueService::stop() {
  impl_->server.stop();
  if (serve_thread_.joinable()) serve_thread_.join();
}

}  // namespace valuekit
