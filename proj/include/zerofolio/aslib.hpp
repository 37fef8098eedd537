#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace zerofolio::aslib {

struct RunRecord {
  double runtime_seconds = 0.0;
  bool solved = false;

  bool operator==(const RunRecord&) const = default;
};

/// Runtime when solved, 10x the cutoff otherwise.
double par10(const RunRecord& run, double cutoff_seconds);

/// Bookkeeping from ingestion that does not change the scenario itself.
struct LoadMetadata {
  std::size_t dropped_without_fold = 0;  // instances in runs but absent from cv.arff
  std::size_t ignored_repetitions = 0;   // rows with repetition != 1 or repeated pairs
  std::size_t clamped_runs = 0;          // status ok with runtime > cutoff

  bool operator==(const LoadMetadata&) const = default;
};

/// An ASlib scenario. Per-instance tables are indexed by position in
/// `instances`; per-algorithm columns by position in `algorithms`.
struct Scenario {
  std::string name;
  std::vector<std::string> algorithms;
  double cutoff_seconds = 0.0;
  std::vector<std::string> instances;
  std::vector<std::vector<RunRecord>> runs;  // [instance][algorithm]
  std::vector<std::string> feature_names;
  std::vector<std::vector<std::optional<double>>> features;  // [instance][feature]; empty when absent
  std::vector<int> folds;                                    // [instance], 1-based
  LoadMetadata metadata;

  /// Checks every invariant and rebuilds the id index. Call after filling
  /// the fields by hand. Throws Error(InconsistentScenario).
  void finalize();

  std::size_t index_of(std::string_view instance_id) const;  // throws UnknownInstance
  bool contains(std::string_view instance_id) const;
  int fold_count() const;
  bool has_features() const { return !feature_names.empty(); }
  double par10(std::size_t instance, std::size_t algorithm) const {
    return aslib::par10(runs[instance][algorithm], cutoff_seconds);
  }
  std::vector<double> par10_row(std::size_t instance) const;

  bool operator==(const Scenario& other) const;

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

/// Fields of `description.txt` the loader consumes.
struct Description {
  std::string scenario_id;
  double cutoff_seconds = 0.0;
  std::vector<std::string> algorithms;
  std::string performance_measure;  // first entry of performance_measures, may be empty
};

Description parse_description(std::string_view text);

/// Loads `description.txt`, `algorithm_runs.arff`, `cv.arff` and the
/// optional `feature_values.arff` from `dir`.
Scenario load_scenario(const std::filesystem::path& dir);

/// Instance id -> raw files, in the order listed.
struct InstanceManifest {
  std::map<std::string, std::vector<std::filesystem::path>> entries;

  bool contains(const std::string& id) const { return entries.count(id) != 0; }
};

/// Parses `<id>\t<path>[\t<path>...]` lines. Relative paths resolve against
/// `base_dir`. Blank lines and lines starting with '#' are skipped.
InstanceManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
InstanceManifest load_manifest(const std::filesystem::path& path);

}  // namespace zerofolio::aslib
