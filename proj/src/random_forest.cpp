#include "zerofolio/random_forest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "zerofolio/error.hpp"
#include "zerofolio/parallel.hpp"
#include "zerofolio/serialize.hpp"

namespace zerofolio {

namespace {

constexpr double kMinImprovement = 1e-12;

double gini(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (auto c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

std::int32_t majority(std::span<const std::size_t> counts) {
  return static_cast<std::int32_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

struct Split {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(std::span<const std::vector<double>> rows, std::span<const std::size_t> labels,
              std::size_t n_classes, const RandomForestConfig& config, std::uint64_t seed)
      : rows_(rows), labels_(labels), n_classes_(n_classes), config_(config), rng_(seed) {
    const std::size_t d = rows_.empty() ? 0 : rows_.front().size();
    n_features_ = d;
    mtry_ = d == 0 ? 0 : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    features_.resize(d);
    std::iota(features_.begin(), features_.end(), 0);
  }

  DecisionTree build() {
    const std::size_t n = rows_.size();
    std::vector<std::size_t> sample(n);
    if (config_.bootstrap) {
      for (auto& s : sample) s = static_cast<std::size_t>(rng_.below(n));
    } else {
      std::iota(sample.begin(), sample.end(), 0);
    }

    struct Pending {
      std::size_t node;
      std::vector<std::size_t> members;
    };
    nodes_.clear();
    nodes_.emplace_back();
    std::vector<Pending> stack;
    stack.push_back({0, std::move(sample)});
    while (!stack.empty()) {
      Pending job = std::move(stack.back());
      stack.pop_back();
      std::vector<std::size_t> counts(n_classes_, 0);
      for (auto i : job.members) ++counts[labels_[i]];
      nodes_[job.node].label = majority(counts);
      const double parent = gini(counts, job.members.size());
      if (parent <= 0.0) continue;
      const Split split = best_split(job.members, parent);
      if (split.feature < 0) continue;

      std::vector<std::size_t> left, right;
      for (auto i : job.members) {
        (rows_[i][static_cast<std::size_t>(split.feature)] <= split.threshold ? left : right).push_back(i);
      }
      const auto left_id = static_cast<std::int32_t>(nodes_.size());
      nodes_.emplace_back();
      nodes_.emplace_back();
      auto& node = nodes_[job.node];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = left_id;
      node.right = left_id + 1;
      // Right first so the left subtree is expanded (and draws randomness) first.
      stack.push_back({static_cast<std::size_t>(left_id + 1), std::move(right)});
      stack.push_back({static_cast<std::size_t>(left_id), std::move(left)});
    }
    return DecisionTree(std::move(nodes_));
  }

 private:
  Split best_split(const std::vector<std::size_t>& members, double parent) {
    // Partial Fisher-Yates: the first mtry_ entries become the candidates.
    for (std::size_t f = 0; f < mtry_; ++f) {
      const auto j = f + static_cast<std::size_t>(rng_.below(n_features_ - f));
      std::swap(features_[f], features_[j]);
    }
    Split best;
    best.impurity = parent - kMinImprovement;
    std::vector<std::pair<double, std::size_t>> values(members.size());
    std::vector<std::size_t> left(n_classes_), right(n_classes_);
    std::vector<std::size_t> boundaries;
    const std::size_t total = members.size();
    for (std::size_t f = 0; f < mtry_; ++f) {
      const std::size_t feature = features_[f];
      for (std::size_t m = 0; m < total; ++m) values[m] = {rows_[members[m]][feature], labels_[members[m]]};
      std::sort(values.begin(), values.end());
      boundaries.clear();
      for (std::size_t m = 0; m + 1 < total; ++m) {
        if (values[m].first < values[m + 1].first) boundaries.push_back(m);
      }
      if (boundaries.empty()) continue;
      if (boundaries.size() > config_.max_thresholds) {
        std::vector<std::size_t> picked;
        const std::size_t c = boundaries.size();
        const std::size_t q = config_.max_thresholds;
        for (std::size_t j = 0; j < q; ++j) {
          const std::size_t idx = q == 1 ? c / 2 : j * (c - 1) / (q - 1);
          if (picked.empty() || picked.back() != boundaries[idx]) picked.push_back(boundaries[idx]);
        }
        boundaries.swap(picked);
      }
      std::fill(left.begin(), left.end(), 0);
      std::fill(right.begin(), right.end(), 0);
      for (const auto& v : values) ++right[v.second];
      std::size_t pos = 0;
      for (auto b : boundaries) {
        for (; pos <= b; ++pos) {
          --right[values[pos].second];
          ++left[values[pos].second];
        }
        const std::size_t nl = b + 1, nr = total - nl;
        const double impurity = (static_cast<double>(nl) * gini(left, nl) + static_cast<double>(nr) * gini(right, nr)) /
                                static_cast<double>(total);
        if (impurity < best.impurity) {
          best.impurity = impurity;
          best.feature = static_cast<std::int32_t>(feature);
          best.threshold = 0.5 * (values[b].first + values[b + 1].first);
          // Midpoint can round up to the upper value for adjacent doubles.
          if (!(best.threshold < values[b + 1].first)) best.threshold = values[b].first;
        }
      }
    }
    return best;
  }

  std::span<const std::vector<double>> rows_;
  std::span<const std::size_t> labels_;
  std::size_t n_classes_;
  const RandomForestConfig& config_;
  SplitMix64 rng_;
  std::size_t n_features_ = 0;
  std::size_t mtry_ = 0;
  std::vector<std::size_t> features_;
  std::vector<DecisionTree::Node> nodes_;
};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

struct Reader {
  std::string_view bytes;
  std::size_t pos = 0;

  std::uint64_t take(int width) {
    if (pos + static_cast<std::size_t>(width) > bytes.size()) {
      throw Error(ErrorKind::InvalidArgument, "truncated random forest model");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t{static_cast<unsigned char>(bytes[pos++])} << (8 * i);
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(take(8)); }
};

}  // namespace

std::size_t DecisionTree::predict(std::span<const double> row) const {
  std::size_t at = 0;
  while (nodes_[at].feature >= 0) {
    const auto& n = nodes_[at];
    at = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return static_cast<std::size_t>(nodes_[at].label);
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::size_t best = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 1}};
  while (!stack.empty()) {
    auto [at, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (nodes_[at].feature >= 0) {
      stack.push_back({static_cast<std::size_t>(nodes_[at].left), d + 1});
      stack.push_back({static_cast<std::size_t>(nodes_[at].right), d + 1});
    }
  }
  return best;
}

RandomForestModel::RandomForestModel(std::vector<DecisionTree> trees, std::size_t n_features, std::size_t n_classes)
    : trees_(std::move(trees)), n_features_(n_features), n_classes_(n_classes) {}

std::vector<double> RandomForestModel::vote_fractions(std::span<const double> row) const {
  if (row.size() != n_features_) {
    throw Error(ErrorKind::ColumnMismatch,
                "row has " + std::to_string(row.size()) + " features, model expects " + std::to_string(n_features_));
  }
  std::vector<double> votes(n_classes_, 0.0);
  for (const auto& tree : trees_) votes[tree.predict(row)] += 1.0;
  for (auto& v : votes) v /= static_cast<double>(trees_.size());
  return votes;
}

std::size_t RandomForestModel::predict(std::span<const double> row) const {
  const auto votes = vote_fractions(row);
  return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::string RandomForestModel::to_bytes() const {
  std::string out = "ZFRF";
  put_u32(out, 1);
  put_u32(out, static_cast<std::uint32_t>(n_features_));
  put_u32(out, static_cast<std::uint32_t>(n_classes_));
  put_u32(out, static_cast<std::uint32_t>(trees_.size()));
  for (const auto& tree : trees_) {
    put_u32(out, static_cast<std::uint32_t>(tree.nodes().size()));
    for (const auto& n : tree.nodes()) {
      put_u32(out, static_cast<std::uint32_t>(n.feature));
      const auto bits = std::bit_cast<std::uint64_t>(n.threshold);
      for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
      put_u32(out, static_cast<std::uint32_t>(n.left));
      put_u32(out, static_cast<std::uint32_t>(n.right));
      put_u32(out, static_cast<std::uint32_t>(n.label));
    }
  }
  return out;
}

RandomForestModel RandomForestModel::from_bytes(std::string_view bytes) {
  if (bytes.substr(0, 4) != "ZFRF") throw Error(ErrorKind::InvalidArgument, "not a random forest model");
  Reader r{bytes, 4};
  if (const auto version = r.u32(); version != 1) {
    throw Error(ErrorKind::InvalidArgument, "unsupported random forest model version " + std::to_string(version));
  }
  const std::size_t features = r.u32();
  const std::size_t classes = r.u32();
  const std::size_t n_trees = r.u32();
  std::vector<DecisionTree> trees;
  for (std::size_t t = 0; t < n_trees; ++t) {
    const std::size_t n_nodes = r.u32();
    std::vector<DecisionTree::Node> nodes(n_nodes);
    for (auto& n : nodes) {
      n.feature = r.i32();
      n.threshold = r.f64();
      n.left = r.i32();
      n.right = r.i32();
      n.label = r.i32();
    }
    for (const auto& n : nodes) {
      const bool bad_leaf = n.feature < 0 && (n.label < 0 || static_cast<std::size_t>(n.label) >= classes);
      const bool bad_split = n.feature >= 0 && (static_cast<std::size_t>(n.feature) >= features || n.left < 0 ||
                                                n.right < 0 || static_cast<std::size_t>(n.left) >= n_nodes ||
                                                static_cast<std::size_t>(n.right) >= n_nodes);
      if (bad_leaf || bad_split) throw Error(ErrorKind::InvalidArgument, "corrupt random forest node");
    }
    if (nodes.empty()) throw Error(ErrorKind::InvalidArgument, "empty tree in random forest model");
    trees.emplace_back(std::move(nodes));
  }
  if (r.pos != bytes.size()) throw Error(ErrorKind::InvalidArgument, "trailing bytes in random forest model");
  return RandomForestModel(std::move(trees), features, classes);
}

RandomForestModel rf_train(std::span<const std::vector<double>> rows, std::span<const std::size_t> labels,
                           std::size_t n_classes, const RandomForestConfig& config) {
  if (rows.empty() || rows.size() != labels.size()) {
    throw Error(ErrorKind::LengthMismatch, "random forest needs matching, non-empty rows and labels");
  }
  if (config.n_trees < 1) throw Error(ErrorKind::InvalidArgument, "n_trees must be >= 1");
  if (config.max_thresholds < 1) throw Error(ErrorKind::InvalidArgument, "max_thresholds must be >= 1");
  const std::size_t d = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != d) throw Error(ErrorKind::ColumnMismatch, "training rows differ in width");
  }
  for (auto l : labels) {
    if (l >= n_classes) throw Error(ErrorKind::InvalidArgument, "label out of range");
  }
  std::vector<DecisionTree> trees(config.n_trees);
  parallel_for(config.n_trees, config.jobs, [&](std::size_t t) {
    TreeBuilder builder(rows, labels, n_classes, config, SplitMix64::mix(config.seed + t));
    trees[t] = builder.build();
  });
  return RandomForestModel(std::move(trees), d, n_classes);
}

}  // namespace zerofolio
