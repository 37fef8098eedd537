#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zerofolio/embedding.hpp"

namespace zerofolio {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Bucket index of every character n-gram (n in [ngram_min, ngram_max],
/// characters = Unicode scalar values) of well-formed UTF-8 `text`.
std::vector<std::size_t> ngram_buckets(std::string_view text, std::size_t dimensions,
                                       std::size_t ngram_min, std::size_t ngram_max);

/// Hashed character n-gram TF-IDF with smoothed IDF,
/// idf_j = ln((1 + N) / (1 + df_j)) + 1.
class TfIdfModel {
 public:
  TfIdfModel(std::size_t dimensions, std::size_t ngram_min, std::size_t ngram_max,
             std::vector<double> idf, std::vector<std::size_t> document_frequency = {});

  static TfIdfModel fit(const std::vector<std::string>& corpus, const BackendConfig& config);

  /// tf * idf per bucket, L2-normalized; text without n-grams maps to zeros.
  EmbeddingVector embed(std::string_view text) const;

  std::size_t dimensions() const { return dimensions_; }
  std::size_t ngram_min() const { return ngram_min_; }
  std::size_t ngram_max() const { return ngram_max_; }
  const std::vector<double>& idf() const { return idf_; }
  /// Empty for models rebuilt from stored IDF weights.
  const std::vector<std::size_t>& document_frequency() const { return df_; }

 private:
  std::size_t dimensions_;
  std::size_t ngram_min_;
  std::size_t ngram_max_;
  std::vector<double> idf_;
  std::vector<std::size_t> df_;
};

inline TfIdfModel tfidf_fit(const std::vector<std::string>& corpus, const BackendConfig& config) {
  return TfIdfModel::fit(corpus, config);
}

inline EmbeddingVector tfidf_embed(std::string_view text, const TfIdfModel& model) {
  return model.embed(text);
}

}  // namespace zerofolio
