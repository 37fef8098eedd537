#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "zerofolio/aslib.hpp"
#include "zerofolio/embedding.hpp"
#include "zerofolio/random_forest.hpp"
#include "zerofolio/selector.hpp"

namespace zerofolio::eval {

/// Embeddings for one cross-validation fold. Instances are indices into the
/// scenario; `train` and `test` come back in the order requested.
struct FoldEmbeddings {
  std::vector<EmbeddingVector> train;
  std::vector<EmbeddingVector> test;
};

class FoldEmbedder {
 public:
  virtual ~FoldEmbedder() = default;
  virtual FoldEmbeddings embed(std::span<const std::size_t> train, std::span<const std::size_t> test,
                               std::uint64_t seed) const = 0;
};

/// Vectors fixed ahead of time per (instance, seed): cached remote
/// embeddings, or vectors injected directly by tests.
class PrecomputedEmbedder : public FoldEmbedder {
 public:
  void set(std::size_t instance, std::uint64_t seed, EmbeddingVector vec);
  const EmbeddingVector& get(std::size_t instance, std::uint64_t seed) const;
  FoldEmbeddings embed(std::span<const std::size_t> train, std::span<const std::size_t> test,
                       std::uint64_t seed) const override;

 private:
  std::map<std::pair<std::size_t, std::uint64_t>, EmbeddingVector> vectors_;
};

/// Fits TF-IDF on each fold's training texts only, then embeds both sides.
class TfIdfFoldEmbedder : public FoldEmbedder {
 public:
  /// texts[seed][instance] is the serialized text of that instance.
  TfIdfFoldEmbedder(BackendConfig config, std::map<std::uint64_t, std::vector<std::string>> texts);
  FoldEmbeddings embed(std::span<const std::size_t> train, std::span<const std::size_t> test,
                       std::uint64_t seed) const override;

 private:
  BackendConfig config_;
  std::map<std::uint64_t, std::vector<std::string>> texts_;
};

struct SbsSpec {};
/// Always picks the per-instance best algorithm; its PAR10 is the VBS.
struct OracleSpec {};
struct ZeroFolioSpec {
  SelectorConfig config;
  std::vector<std::uint64_t> seeds{0};
  /// Append standardized hand-crafted features to each embedding.
  bool concat_features = false;
};
struct RandomForestSpec {
  RandomForestConfig config;
};
struct HybridSpec {
  double alpha = 0.5;
  ZeroFolioSpec zerofolio;
  RandomForestSpec forest;
};

using SelectorSpec = std::variant<SbsSpec, OracleSpec, ZeroFolioSpec, RandomForestSpec, HybridSpec>;

struct NamedSelector {
  std::string name;
  SelectorSpec spec;
};

/// Called once per fold before training with the fold's train and test
/// instance indices.
using TrainingObserver = std::function<void(int fold, std::span<const std::size_t> train,
                                            std::span<const std::size_t> test)>;

struct EvaluationContext {
  const aslib::Scenario* scenario = nullptr;
  /// Per-instance availability (manifest coverage); empty means all.
  std::vector<bool> available;
  const FoldEmbedder* embedder = nullptr;
  std::size_t jobs = 1;
  TrainingObserver observer;
};

struct InstanceOutcome {
  std::size_t instance = 0;
  std::size_t algorithm = 0;
  double par10 = 0.0;

  bool operator==(const InstanceOutcome&) const = default;
};

struct FoldResult {
  int fold = 0;
  std::vector<InstanceOutcome> per_instance;

  double mean_par10() const;
};

/// Trains on folds != f and predicts fold f, for every fold with at least
/// one available test instance. Throws Error(NoEmbeddableInstances) when no
/// fold has one.
std::vector<FoldResult> cross_validate(const EvaluationContext& ctx, const SelectorSpec& spec);

/// Pooled per-instance mean over all folds.
double overall_par10(std::span<const FoldResult> results);

/// 100 * (sbs - alg) / (sbs - vbs). Throws Error(DegenerateGap) when sbs <= vbs.
double gap_closed(double sbs, double alg, double vbs);

struct FoldSummary {
  int fold = 0;
  std::size_t instances = 0;
  double par10_mean = 0.0;

  bool operator==(const FoldSummary&) const = default;
};

struct SelectorSummary {
  std::string name;
  std::vector<FoldSummary> folds;
  double overall_par10 = 0.0;
  std::optional<double> gap_closed;  // absent when sbs <= vbs

  bool operator==(const SelectorSummary&) const = default;
};

struct PairSignificance {
  std::string first;
  std::string second;
  std::size_t folds = 0;  // paired folds
  double statistic = 0.0;
  double p_value = 1.0;

  bool operator==(const PairSignificance&) const = default;
};

struct EvaluationReport {
  static constexpr int kSchemaVersion = 1;

  std::string scenario_name;
  std::size_t instances_total = 0;
  std::size_t instances_embedded = 0;
  /// Cross-validated SBS and mean VBS on the embeddable instances; all gaps use these.
  double sbs_par10 = 0.0;
  double vbs_par10 = 0.0;
  /// The same on every scenario instance.
  double sbs_par10_full = 0.0;
  double vbs_par10_full = 0.0;
  std::vector<SelectorSummary> selectors;
  std::vector<FoldSummary> vbs_folds;
  std::vector<PairSignificance> significance;

  bool operator==(const EvaluationReport&) const = default;
};

SelectorSummary summarize(const std::string& name, std::span<const FoldResult> results);

/// Runs every selector, the SBS/VBS references and pairwise fold tests.
EvaluationReport evaluate(const EvaluationContext& ctx, std::span<const NamedSelector> selectors);

}  // namespace zerofolio::eval
