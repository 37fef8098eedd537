#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zerofolio/embedding.hpp"

namespace zerofolio {

enum class Metric { Manhattan, Cosine };
enum class Weighting { InverseDistance, Uniform };

const char* to_string(Metric m);
const char* to_string(Weighting w);

struct SelectorConfig {
  std::size_t k = 10;
  Metric metric = Metric::Manhattan;
  Weighting weighting = Weighting::InverseDistance;

  bool operator==(const SelectorConfig&) const = default;
};

/// Per-algorithm score; lower is better.
struct AlgorithmScores {
  std::vector<double> scores;

  std::size_t size() const { return scores.size(); }
  double operator[](std::size_t i) const { return scores[i]; }
  bool operator==(const AlgorithmScores&) const = default;
};

double manhattan_distance(std::span<const double> a, std::span<const double> b);

/// 1 - cos(a, b), clamped to [0, 2]; 1 when either vector has zero norm.
double cosine_distance(std::span<const double> a, std::span<const double> b);

double distance(Metric metric, std::span<const double> a, std::span<const double> b);

struct Neighbor {
  std::size_t index;
  double distance;

  bool operator==(const Neighbor&) const = default;
};

/// Weighted k-NN over training embeddings and their PAR10 rows.
///
/// Scores are score(a) = sum_i w_i * t_{i,a} over the k nearest training
/// instances. With inverse-distance weighting w_i = 1/d_i, except that when
/// any neighbor sits at distance 0 only the zero-distance neighbors count,
/// each with weight 1. k larger than the training set uses every instance.
class TrainedSelector {
 public:
  TrainedSelector(std::vector<EmbeddingVector> embeddings, std::vector<std::vector<double>> par10_matrix,
                  SelectorConfig config);

  /// The min(k, n) nearest training instances ordered by (distance, index).
  std::vector<Neighbor> nearest_neighbors(const EmbeddingVector& query) const;

  AlgorithmScores score_algorithms(const EmbeddingVector& query) const;

  std::size_t size() const { return embeddings_.size(); }
  std::size_t algorithm_count() const { return algorithm_count_; }
  const SelectorConfig& config() const { return config_; }
  const std::vector<EmbeddingVector>& embeddings() const { return embeddings_; }
  const std::vector<std::vector<double>>& par10_matrix() const { return par10_; }

 private:
  std::vector<EmbeddingVector> embeddings_;
  std::vector<std::vector<double>> par10_;
  SelectorConfig config_;
  std::size_t algorithm_count_ = 0;
};

/// argmin, lowest index on ties.
std::size_t select(const AlgorithmScores& scores);

/// Element-wise mean across seeds.
AlgorithmScores vote_scores(std::span<const AlgorithmScores> per_seed);

/// Maps entries to [0, 1] by (x - min) / (max - min); constant vectors map to zeros.
AlgorithmScores min_max_normalize(const AlgorithmScores& s);

/// alpha * norm(a) + (1 - alpha) * norm(b).
AlgorithmScores hybrid_soft_vote(const AlgorithmScores& a, const AlgorithmScores& b, double alpha);

/// Embedding followed by (already standardized) hand-crafted features.
EmbeddingVector concat_features(const EmbeddingVector& embedding, std::span<const double> features);

}  // namespace zerofolio
