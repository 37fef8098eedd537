#include "zerofolio/tfidf.hpp"

#include <cmath>

#include "zerofolio/error.hpp"
#include "zerofolio/text.hpp"

namespace zerofolio {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::vector<std::size_t> ngram_buckets(std::string_view text, std::size_t dimensions,
                                       std::size_t ngram_min, std::size_t ngram_max) {
  std::vector<std::size_t> buckets;
  const auto chars = text::scalars(text);
  for (std::size_t n = ngram_min; n <= ngram_max; ++n) {
    if (chars.size() < n) break;
    for (std::size_t start = 0; start + n <= chars.size(); ++start) {
      // Scalars are contiguous views into `text`, so the window is one span.
      const char* begin = chars[start].data();
      const char* end = chars[start + n - 1].data() + chars[start + n - 1].size();
      const std::string_view gram(begin, static_cast<std::size_t>(end - begin));
      buckets.push_back(static_cast<std::size_t>(fnv1a64(gram) % dimensions));
    }
  }
  return buckets;
}

TfIdfModel::TfIdfModel(std::size_t dimensions, std::size_t ngram_min, std::size_t ngram_max,
                       std::vector<double> idf, std::vector<std::size_t> document_frequency)
    : dimensions_(dimensions),
      ngram_min_(ngram_min),
      ngram_max_(ngram_max),
      idf_(std::move(idf)),
      df_(std::move(document_frequency)) {
  if (dimensions_ == 0 || ngram_min_ == 0 || ngram_min_ > ngram_max_) {
    throw Error(ErrorKind::InvalidArgument, "tf-idf needs dimensions >= 1 and 1 <= ngram_min <= ngram_max");
  }
  if (idf_.size() != dimensions_) throw Error(ErrorKind::DimensionMismatch, "idf length != dimensions");
}

TfIdfModel TfIdfModel::fit(const std::vector<std::string>& corpus, const BackendConfig& config) {
  if (corpus.empty()) throw Error(ErrorKind::InvalidArgument, "tf-idf fit needs a non-empty corpus");
  if (config.kind != BackendKind::TfIdf) throw Error(ErrorKind::InvalidArgument, "backend is not TfIdf");
  config.validate();
  const std::size_t dims = config.dimensions;
  std::vector<std::size_t> df(dims, 0);
  std::vector<std::size_t> last_doc(dims, static_cast<std::size_t>(-1));
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (auto b : ngram_buckets(corpus[d], dims, config.ngram_min, config.ngram_max)) {
      if (last_doc[b] != d) {
        last_doc[b] = d;
        ++df[b];
      }
    }
  }
  const double n = static_cast<double>(corpus.size());
  std::vector<double> idf(dims);
  for (std::size_t j = 0; j < dims; ++j) {
    idf[j] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[j]))) + 1.0;
  }
  return TfIdfModel(dims, config.ngram_min, config.ngram_max, std::move(idf), std::move(df));
}

EmbeddingVector TfIdfModel::embed(std::string_view text) const {
  std::vector<double> v(dimensions_, 0.0);
  for (auto b : ngram_buckets(text, dimensions_, ngram_min_, ngram_max_)) v[b] += 1.0;
  double norm2 = 0.0;
  for (std::size_t j = 0; j < dimensions_; ++j) {
    v[j] *= idf_[j];
    norm2 += v[j] * v[j];
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : v) x *= inv;
  }
  return EmbeddingVector(std::move(v));
}

}  // namespace zerofolio
