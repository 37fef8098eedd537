#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "zerofolio/embedding.hpp"
#include "zerofolio/error.hpp"
#include "zerofolio/eval.hpp"
#include "zerofolio/random_forest.hpp"
#include "zerofolio/report.hpp"
#include "zerofolio/selector.hpp"
#include "zerofolio/serialize.hpp"

namespace zerofolio::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kBackendError = 3,
  kPartialFailure = 4,
};

int exit_code_for(ErrorKind kind);

/// Everything a command needs. Defaults encode the standard configuration:
/// k = 10, Manhattan, inverse-distance weighting, shuffled 10000-character
/// serialization, seed 0.
struct RunConfig {
  fs::path scenario_dir;
  fs::path manifest;
  fs::path cache_dir = ".zerofolio-cache";
  fs::path output;  // empty: standard output
  fs::path state;   // trained selector state (written by embed, read by select)
  BackendConfig backend;
  SerializationConfig serialization;
  SelectorConfig selector;
  RandomForestConfig forest;
  std::vector<std::uint64_t> seeds{0};
  double alpha = 0.5;
  std::vector<std::string> selectors{"sbs", "rf", "zf", "zf-v2"};
  report::Format format = report::Format::Csv;
  std::size_t jobs = 1;
};

struct EmbedFailure {
  std::string instance;
  std::uint64_t seed = 0;
  std::string message;
};

/// Counts are per (instance, seed) pair.
struct EmbedSummary {
  std::size_t embedded = 0;
  std::size_t cached = 0;
  std::size_t failed = 0;
  std::vector<EmbedFailure> failures;
};

/// Serializes every manifest instance of the scenario for every seed and
/// fills the cache. Failures are recorded per instance and do not stop the
/// batch; authentication failures do. Writes selector state when
/// `cfg.state` is set.
EmbedSummary cmd_embed(const RunConfig& cfg);

/// Cross-validates `cfg.selectors`; writes the report to `cfg.output` (or
/// returns it only, when output is empty).
eval::EvaluationReport cmd_evaluate(const RunConfig& cfg);

/// One-dimension-at-a-time variants of the zerofolio selector as CSV.
/// `grid` names dimensions among shuffle, metric, weighting, k, seeds,
/// naive; empty means all.
std::string cmd_ablate(const RunConfig& cfg, const std::vector<std::string>& grid);

struct SelectOutcome {
  std::size_t algorithm = 0;
  std::string algorithm_name;
  std::vector<std::string> algorithms;
  AlgorithmScores scores;
};

/// Picks an algorithm for one new instance (one or more files, in order)
/// using the state saved by `cmd_embed`.
SelectOutcome cmd_select(const RunConfig& cfg, const std::vector<fs::path>& instance_files);

/// Re-emits saved JSON reports in `format`; several reports become one table.
std::string cmd_report(const std::vector<fs::path>& inputs, report::Format format);

/// Parses a selector list entry ("sbs", "rf", "zf", "zf-v2", "zf-concat",
/// "hybrid") against the run configuration.
eval::NamedSelector make_selector(const std::string& name, const RunConfig& cfg);

Metric parse_metric(const std::string& s);
Weighting parse_weighting(const std::string& s);
std::vector<std::uint64_t> parse_seeds(const std::string& s);

}  // namespace zerofolio::cli
