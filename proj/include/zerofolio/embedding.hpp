#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace zerofolio {

/// A fixed-dimensional embedding of one serialized instance.
struct EmbeddingVector {
  std::vector<double> values;

  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> v) : values(std::move(v)) {}
  EmbeddingVector(std::initializer_list<double> v) : values(v) {}

  std::size_t size() const { return values.size(); }
  std::span<const double> span() const { return values; }
  double operator[](std::size_t i) const { return values[i]; }

  bool operator==(const EmbeddingVector&) const = default;
};

enum class BackendKind { Remote, TfIdf };

struct BackendConfig {
  BackendKind kind = BackendKind::TfIdf;
  std::string model_id;      // Remote
  std::string endpoint_url;  // Remote; "/embeddings" is appended unless already present
  std::string api_key;       // Remote; held in memory only
  std::size_t dimensions = 3072;  // TfIdf
  std::size_t ngram_min = 2;      // TfIdf
  std::size_t ngram_max = 4;      // TfIdf
  std::size_t max_parallel = 8;
  std::size_t max_retries = 5;
  std::size_t batch_size = 16;
  unsigned initial_backoff_ms = 500;
  unsigned timeout_seconds = 120;

  /// Throws Error(InvalidArgument) when a field combination is unusable.
  void validate() const;
};

}  // namespace zerofolio
