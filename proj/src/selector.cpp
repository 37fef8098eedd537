#include "zerofolio/selector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zerofolio/error.hpp"

namespace zerofolio {

const char* to_string(Metric m) { return m == Metric::Manhattan ? "manhattan" : "cosine"; }
const char* to_string(Weighting w) { return w == Weighting::InverseDistance ? "inverse" : "uniform"; }

namespace {

void check_dims(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "vectors of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorKind::LengthMismatch,
                "score vectors of length " + std::to_string(a) + " and " + std::to_string(b));
  }
}

}  // namespace

double manhattan_distance(std::span<const double> a, std::span<const double> b) {
  check_dims(a, b);
  double sum = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) sum += std::fabs(a[d] - b[d]);
  return sum;
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  check_dims(a, b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    dot += a[d] * b[d];
    na += a[d] * a[d];
    nb += b[d] * b[d];
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  const double sim = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(1.0 - sim, 0.0, 2.0);
}

double distance(Metric metric, std::span<const double> a, std::span<const double> b) {
  return metric == Metric::Manhattan ? manhattan_distance(a, b) : cosine_distance(a, b);
}

TrainedSelector::TrainedSelector(std::vector<EmbeddingVector> embeddings,
                                 std::vector<std::vector<double>> par10_matrix, SelectorConfig config)
    : embeddings_(std::move(embeddings)), par10_(std::move(par10_matrix)), config_(config) {
  if (config_.k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  if (embeddings_.size() != par10_.size()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(embeddings_.size()) + " embeddings but " +
                                               std::to_string(par10_.size()) + " PAR10 rows");
  }
  if (!par10_.empty()) algorithm_count_ = par10_.front().size();
  for (std::size_t i = 0; i < embeddings_.size(); ++i) {
    check_dims(embeddings_[i].span(), embeddings_.front().span());
    check_lengths(par10_[i].size(), algorithm_count_);
    for (double t : par10_[i]) {
      if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "PAR10 values must be finite and >= 0");
    }
  }
}

std::vector<Neighbor> TrainedSelector::nearest_neighbors(const EmbeddingVector& query) const {
  if (embeddings_.empty()) throw Error(ErrorKind::EmptyTrainingSet, "selector has no training instances");
  std::vector<Neighbor> all;
  all.reserve(embeddings_.size());
  for (std::size_t i = 0; i < embeddings_.size(); ++i) {
    all.push_back({i, distance(config_.metric, query.span(), embeddings_[i].span())});
  }
  const std::size_t k = std::min(config_.k, all.size());
  auto by_distance = [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), by_distance);
  all.resize(k);
  return all;
}

AlgorithmScores TrainedSelector::score_algorithms(const EmbeddingVector& query) const {
  const auto neighbors = nearest_neighbors(query);
  AlgorithmScores out{std::vector<double>(algorithm_count_, 0.0)};
  const bool exact = config_.weighting == Weighting::InverseDistance && neighbors.front().distance == 0.0;
  for (const auto& nb : neighbors) {
    double w = 1.0;
    if (exact) {
      if (nb.distance != 0.0) break;  // sorted, so the zero-distance block is a prefix
    } else if (config_.weighting == Weighting::InverseDistance) {
      w = 1.0 / nb.distance;
    }
    const auto& row = par10_[nb.index];
    for (std::size_t a = 0; a < algorithm_count_; ++a) out.scores[a] += w * row[a];
  }
  return out;
}

std::size_t select(const AlgorithmScores& scores) {
  if (scores.scores.empty()) throw Error(ErrorKind::InvalidArgument, "cannot select from empty scores");
  std::size_t best = 0;
  for (std::size_t a = 1; a < scores.size(); ++a) {
    if (scores[a] < scores[best]) best = a;
  }
  return best;
}

AlgorithmScores vote_scores(std::span<const AlgorithmScores> per_seed) {
  if (per_seed.empty()) throw Error(ErrorKind::LengthMismatch, "voting needs at least one score vector");
  const std::size_t n = per_seed.front().size();
  AlgorithmScores out{std::vector<double>(n, 0.0)};
  for (const auto& s : per_seed) {
    check_lengths(s.size(), n);
    for (std::size_t a = 0; a < n; ++a) out.scores[a] += s[a];
  }
  const double count = static_cast<double>(per_seed.size());
  for (auto& x : out.scores) x /= count;
  return out;
}

AlgorithmScores min_max_normalize(const AlgorithmScores& s) {
  AlgorithmScores out{std::vector<double>(s.size(), 0.0)};
  if (s.scores.empty()) return out;
  const auto [lo, hi] = std::minmax_element(s.scores.begin(), s.scores.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t a = 0; a < s.size(); ++a) out.scores[a] = std::clamp((s[a] - *lo) / range, 0.0, 1.0);
  return out;
}

AlgorithmScores hybrid_soft_vote(const AlgorithmScores& a, const AlgorithmScores& b, double alpha) {
  check_lengths(a.size(), b.size());
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::InvalidAlpha, "alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  const auto na = min_max_normalize(a);
  const auto nb = min_max_normalize(b);
  AlgorithmScores out{std::vector<double>(a.size())};
  for (std::size_t i = 0; i < a.size(); ++i) out.scores[i] = alpha * na[i] + (1.0 - alpha) * nb[i];
  return out;
}

EmbeddingVector concat_features(const EmbeddingVector& embedding, std::span<const double> features) {
  std::vector<double> v;
  v.reserve(embedding.size() + features.size());
  v.insert(v.end(), embedding.values.begin(), embedding.values.end());
  v.insert(v.end(), features.begin(), features.end());
  return EmbeddingVector(std::move(v));
}

}  // namespace zerofolio
