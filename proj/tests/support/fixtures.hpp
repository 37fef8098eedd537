#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "zerofolio/aslib.hpp"
#include "zerofolio/eval.hpp"
#include "zerofolio/serialize.hpp"

namespace zerofolio::testing {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("zerofolio-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_text(const fs::path& path, const std::string& contents) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << contents;
}

/// Builds a finalized scenario from a runtime matrix; runtimes >= cutoff
/// are recorded as timeouts.
inline aslib::Scenario make_scenario(const std::vector<std::vector<double>>& runtimes, const std::vector<int>& folds,
                                     double cutoff = 100.0, std::size_t n_algorithms = 0) {
  aslib::Scenario sc;
  sc.name = "synthetic";
  sc.cutoff_seconds = cutoff;
  const std::size_t algos = n_algorithms ? n_algorithms : runtimes.front().size();
  for (std::size_t a = 0; a < algos; ++a) sc.algorithms.push_back("algo" + std::to_string(a));
  for (std::size_t i = 0; i < runtimes.size(); ++i) {
    sc.instances.push_back("inst" + std::to_string(i));
    std::vector<aslib::RunRecord> row;
    for (double t : runtimes[i]) {
      row.push_back(t >= cutoff ? aslib::RunRecord{cutoff, false} : aslib::RunRecord{t, true});
    }
    sc.runs.push_back(row);
    sc.folds.push_back(folds[i]);
  }
  sc.finalize();
  return sc;
}

/// Synthetic scenario with well-separated embedding clusters, one per
/// algorithm; in cluster c algorithm c is fast and the others time out.
struct ClusterScenario {
  aslib::Scenario scenario;
  eval::PrecomputedEmbedder embedder;
  std::vector<std::size_t> cluster;  // per instance
};

inline ClusterScenario make_cluster_scenario(std::size_t n_algorithms, std::size_t per_cluster, int n_folds,
                                             std::uint64_t seed, double label_noise = 0.0,
                                             const std::vector<std::uint64_t>& embed_seeds = {0},
                                             double jitter = 0.05, std::size_t dims = 8) {
  ClusterScenario out;
  SplitMix64 rng(seed);
  std::vector<std::vector<double>> runtimes;
  std::vector<int> folds;
  const double cutoff = 100.0;
  std::vector<std::vector<double>> centers(n_algorithms, std::vector<double>(dims, 0.0));
  for (std::size_t c = 0; c < n_algorithms; ++c) centers[c][c % dims] = 10.0 * static_cast<double>(c / dims + 1);
  std::size_t idx = 0;
  for (std::size_t c = 0; c < n_algorithms; ++c) {
    for (std::size_t k = 0; k < per_cluster; ++k, ++idx) {
      std::size_t winner = c;
      if (label_noise > 0.0 && rng.unit() < label_noise) winner = (c + 1 + rng.below(n_algorithms - 1)) % n_algorithms;
      std::vector<double> row(n_algorithms, cutoff);  // timeouts
      row[winner] = 1.0 + 9.0 * rng.unit();
      runtimes.push_back(row);
      folds.push_back(static_cast<int>(idx % static_cast<std::size_t>(n_folds)) + 1);
      out.cluster.push_back(c);
    }
  }
  out.scenario = make_scenario(runtimes, folds, cutoff);
  for (std::size_t i = 0; i < out.cluster.size(); ++i) {
    for (auto s : embed_seeds) {
      std::vector<double> v = centers[out.cluster[i]];
      for (auto& x : v) x += jitter * (2.0 * rng.unit() - 1.0);
      out.embedder.set(i, s, EmbeddingVector(v));
    }
  }
  return out;
}

/// Writes a small ASlib scenario directory: 4 instances, 2 algorithms, 2 folds.
inline void write_small_scenario(const fs::path& dir, bool with_features = true) {
  write_text(dir / "description.txt",
             "scenario_id: TINY\n"
             "performance_measures:\n  - runtime\n"
             "maximize:\n  - false\n"
             "performance_type:\n  - runtime\n"
             "algorithm_cutoff_time: 100\n"
             "algorithm_cutoff_memory: ?\n"
             "algorithms_deterministic:\n  - fast\n  - slow\n"
             "algorithms_stochastic: \n");
  write_text(dir / "algorithm_runs.arff",
             "@RELATION ALGORITHM_RUNS_TINY\n\n"
             "@ATTRIBUTE instance_id STRING\n"
             "@ATTRIBUTE repetition NUMERIC\n"
             "@ATTRIBUTE algorithm STRING\n"
             "@ATTRIBUTE runtime NUMERIC\n"
             "@ATTRIBUTE runstatus {ok, timeout, memout, crash}\n\n"
             "@DATA\n"
             "i1,1,fast,5,ok\n"
             "i1,1,slow,50,ok\n"
             "i2,1,fast,100,timeout\n"
             "i2,1,slow,20,ok\n"
             "i3,1,fast,7,ok\n"
             "i3,1,slow,100,timeout\n"
             "i4,1,fast,100,crash\n"
             "i4,1,slow,30,ok\n");
  write_text(dir / "cv.arff",
             "@RELATION CV_TINY\n"
             "@ATTRIBUTE instance_id STRING\n"
             "@ATTRIBUTE repetition NUMERIC\n"
             "@ATTRIBUTE fold NUMERIC\n"
             "@DATA\n"
             "i1,1,1\ni2,1,1\ni3,1,2\ni4,1,2\n");
  if (with_features) {
    write_text(dir / "feature_values.arff",
               "@RELATION FEATURES_TINY\n"
               "@ATTRIBUTE instance_id STRING\n"
               "@ATTRIBUTE repetition NUMERIC\n"
               "@ATTRIBUTE vars NUMERIC\n"
               "@ATTRIBUTE clauses NUMERIC\n"
               "@DATA\n"
               "i1,1,10,40\ni2,1,200,?\ni3,1,12,45\ni4,1,?,?\n");
  }
}

}  // namespace zerofolio::testing
