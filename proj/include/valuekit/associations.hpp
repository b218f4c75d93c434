#pragma once

#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "valuekit/core.hpp"

namespace valuekit {

// The three relation kinds queried from the word-association service:
// words with a similar meaning, adjectives that describe the word, and
// words strongly triggered by it.
enum class AssociationRelation { MeansLike, DescribedBy, TriggeredBy };

inline constexpr std::array<AssociationRelation, 3> kAllRelations = {
    AssociationRelation::MeansLike, AssociationRelation::DescribedBy,
    AssociationRelation::TriggeredBy};

// Query parameter for the relation ("ml", "rel_jjb", "rel_trg").
std::string_view relation_param(AssociationRelation rel);

struct AssociationConfig {
  std::string base_url = "https://api.datamuse.com";
  int timeout_seconds = 5;
  std::filesystem::path cache_dir;
  int max_results = 0;  // 0 keeps the service default
};

// HTTP client for a word-association service with an on-disk response
// cache keyed by hash of (relation, word). A cache hit never touches the
// network; responses are only cached after they parse. Cache writes are
// serialized per client instance; reads are lock-free.
class AssociationClient {
 public:
  struct TransportResult {
    int status = 0;
    std::string body;
    std::string error;  // non-empty on transport failure
  };
  // (base_url, path_and_query) -> result. The default transport issues a
  // real HTTP GET; tests inject counting or canned transports.
  using Transport =
      std::function<TransportResult(const std::string&, const std::string&)>;

  explicit AssociationClient(AssociationConfig config,
                             Transport transport = {});

  // Associated words for one relation, lowercased and deduplicated in
  // response order. Throws TransportError on network failure with a cold
  // cache and DecodeError on a malformed body; neither writes the cache.
  std::vector<std::string> fetch(std::string_view word,
                                 AssociationRelation rel);

  // All three relations merged, deduplicated in relation order.
  std::vector<std::string> fetch_associations(std::string_view word);

  std::filesystem::path cache_path(std::string_view word,
                                   AssociationRelation rel) const;

 private:
  std::string request_path(std::string_view word, AssociationRelation rel) const;

  AssociationConfig config_;
  Transport transport_;
  std::mutex cache_write_mutex_;
};

// Parses a service response body (array of {"word": ...} objects) into a
// lowercased, deduplicated word list.
std::vector<std::string> parse_association_body(std::string_view body);

}  // namespace valuekit
