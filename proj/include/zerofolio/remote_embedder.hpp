#pragma once

#include <string>
#include <vector>

#include "zerofolio/embedding.hpp"

namespace zerofolio {

/// Client for an OpenAI-compatible `POST /embeddings` endpoint.
///
/// Texts are sent in batches of `batch_size`, with at most `max_parallel`
/// requests in flight. HTTP 429, 5xx and connection failures are retried
/// with exponential backoff (initial_backoff_ms, doubling) up to
/// `max_retries` extra attempts. 401/403 fail immediately with AuthError.
class RemoteEmbedder {
 public:
  explicit RemoteEmbedder(BackendConfig config);

  /// One vector per text, in input order. Every text must be non-empty.
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const;

  const BackendConfig& config() const { return config_; }

 private:
  std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& batch) const;

  BackendConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;    // request path ending in /embeddings
};

inline std::vector<EmbeddingVector> embed_remote(const std::vector<std::string>& texts,
                                                 const BackendConfig& config) {
  return RemoteEmbedder(config).embed(texts);
}

}  // namespace zerofolio
