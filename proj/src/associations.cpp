#include "valuekit/associations.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "valuekit/rng.hpp"

namespace valuekit {

namespace {

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xf]);
    }
  }
  return out;
}

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

AssociationClient::TransportResult http_get(const std::string& base_url,
                                            const std::string& path,
                                            int timeout_seconds) {
  AssociationClient::TransportResult result;
  httplib::Client client(base_url);
  client.set_connection_timeout(timeout_seconds, 0);
  client.set_read_timeout(timeout_seconds, 0);
  client.set_follow_location(true);
  auto res = client.Get(path);
  if (!res) {
    result.error = "HTTP GET " + base_url + path + " failed: " +
                   httplib::to_string(res.error());
    return result;
  }
  result.status = res->status;
  result.body = res->body;
  if (res->status < 200 || res->status >= 300)
    result.error = "HTTP GET " + base_url + path + " returned status " +
                   std::to_string(res->status);
  return result;
}

}  // namespace

std::string_view relation_param(AssociationRelation rel) {
  switch (rel) {
    case AssociationRelation::MeansLike:
      return "ml";
    case AssociationRelation::DescribedBy:
      return "rel_jjb";
    case AssociationRelation::TriggeredBy:
      return "rel_trg";
  }
  return "ml";
}

std::vector<std::string> parse_association_body(std::string_view body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_array())
    throw DecodeError("association response is not a JSON array");
  std::vector<std::string> words;
  std::set<std::string> seen;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("word") ||
        !item["word"].is_string())
      throw DecodeError("association response entry lacks a \"word\" string");
    std::string w = item["word"].get<std::string>();
    for (char& c : w)
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (seen.insert(w).second) words.push_back(std::move(w));
  }
  return words;
}

AssociationClient::AssociationClient(AssociationConfig config,
                                     Transport transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  if (config_.cache_dir.empty())
    throw InvalidInputError("association client requires a cache directory");
  std::filesystem::create_directories(config_.cache_dir);
  if (!transport_) {
    int timeout = config_.timeout_seconds;
    transport_ = [timeout](const std::string& base, const std::string& path) {
      return http_get(base, path, timeout);
    };
  }
}

std::filesystem::path AssociationClient::cache_path(
    std::string_view word, AssociationRelation rel) const {
  std::string key = std::string(relation_param(rel)) + ":" + std::string(word);
  return config_.cache_dir / (to_hex(fnv1a64(key)) + ".json");
}

std::string AssociationClient::request_path(std::string_view word,
                                            AssociationRelation rel) const {
  std::string path = "/words?" + std::string(relation_param(rel)) + "=" +
                     percent_encode(word);
  if (config_.max_results > 0)
    path += "&max=" + std::to_string(config_.max_results);
  return path;
}

std::vector<std::string> AssociationClient::fetch(std::string_view word,
                                                  AssociationRelation rel) {
  if (word.empty()) throw InvalidInputError("association word must be non-empty");
  const auto cached = cache_path(word, rel);
  if (std::filesystem::exists(cached)) {
    std::ifstream in(cached, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_association_body(buf.str());
  }

  TransportResult res = transport_(config_.base_url, request_path(word, rel));
  if (!res.error.empty())
    throw TransportError("association fetch for \"" + std::string(word) +
                         "\" (" + std::string(relation_param(rel)) +
                         ") failed: " + res.error);
  auto words = parse_association_body(res.body);  // throws before caching

  {
    std::lock_guard<std::mutex> lock(cache_write_mutex_);
    auto tmp = cached;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary);
    if (out) {
      out << res.body;
      out.close();
      std::error_code ec;
      std::filesystem::rename(tmp, cached, ec);
      if (ec) std::filesystem::remove(tmp, ec);
    }
  }
  return words;
}

std::vector<std::string> AssociationClient::fetch_associations(
    std::string_view word) {
  std::vector<std::string> merged;
  std::set<std::string> seen;
  for (AssociationRelation rel : kAllRelations) {
    for (auto& w : fetch(word, rel))
      if (seen.insert(w).second) merged.push_back(std::move(w));
  }
  return merged;
}

}  // namespace valuekit
