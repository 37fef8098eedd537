#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zerofolio {

struct RandomForestConfig {
  std::size_t n_trees = 100;
  std::uint64_t seed = 0;
  /// Candidate thresholds per feature per node (quantile subsample above this).
  std::size_t max_thresholds = 64;
  /// Test hook: grow every tree on the full training set instead of a bootstrap sample.
  bool bootstrap = true;
  std::size_t jobs = 1;
};

/// One CART classification tree stored as a flat node array; node 0 is the root.
class DecisionTree {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left when x[feature] <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t label = 0;

    bool operator==(const Node&) const = default;
  };

  DecisionTree() = default;
  explicit DecisionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  std::size_t predict(std::span<const double> row) const;
  const std::vector<Node>& nodes() const { return nodes_; }
  /// Number of levels; a lone leaf has depth 1.
  std::size_t depth() const;

  bool operator==(const DecisionTree&) const = default;

 private:
  std::vector<Node> nodes_;
};

class RandomForestModel {
 public:
  RandomForestModel() = default;
  RandomForestModel(std::vector<DecisionTree> trees, std::size_t n_features, std::size_t n_classes);

  /// Majority vote over trees, lowest class index on ties. Throws
  /// Error(ColumnMismatch) on a row of the wrong width.
  std::size_t predict(std::span<const double> row) const;

  /// Fraction of trees voting for each class.
  std::vector<double> vote_fractions(std::span<const double> row) const;

  const std::vector<DecisionTree>& trees() const { return trees_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_classes() const { return n_classes_; }

  /// Versioned little-endian binary form: "ZFRF", u32 version, u32 features,
  /// u32 classes, u32 trees, then per tree u32 node count and nodes.
  std::string to_bytes() const;
  static RandomForestModel from_bytes(std::string_view bytes);

  bool operator==(const RandomForestModel&) const = default;

 private:
  std::vector<DecisionTree> trees_;
  std::size_t n_features_ = 0;
  std::size_t n_classes_ = 0;
};

/// Gini-impurity CART forest on bootstrap samples with ceil(sqrt(D)) features
/// tried per node; trees grow until pure or no split lowers impurity. Tree t
/// draws from splitmix64 seeded with mix(seed + t), so results do not
/// depend on `jobs`.
RandomForestModel rf_train(std::span<const std::vector<double>> rows, std::span<const std::size_t> labels,
                           std::size_t n_classes, const RandomForestConfig& config);

inline std::size_t rf_predict(const RandomForestModel& model, std::span<const double> row) {
  return model.predict(row);
}

}  // namespace zerofolio
