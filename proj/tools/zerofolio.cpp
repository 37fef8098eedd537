#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "zerofolio/commands.hpp"
#include "zerofolio/parallel.hpp"
#include "zerofolio/text.hpp"

namespace {

using namespace zerofolio;
using zerofolio::cli::RunConfig;

struct Flags {
  std::string scenario_dir, manifest, cache_dir = ".zerofolio-cache", output, state;
  std::string backend = "tfidf", model, endpoint, api_key_env = "ZEROFOLIO_API_KEY";
  std::size_t budget = 10000, k = 10, dimensions = 3072, batch_size = 16, max_parallel = 8, max_retries = 5;
  std::string seeds = "0", metric = "manhattan", weighting = "inverse", selectors = "sbs,rf,zf,zf-v2";
  std::string format = "csv", grid;
  bool no_shuffle = false;
  double alpha = 0.5;
  std::size_t jobs = default_jobs();
  std::size_t trees = 100;
  std::uint64_t forest_seed = 0;
  std::vector<std::string> inputs;
};

RunConfig to_config(const Flags& f) {
  RunConfig cfg;
  cfg.scenario_dir = f.scenario_dir;
  cfg.manifest = f.manifest;
  cfg.cache_dir = f.cache_dir;
  cfg.output = f.output;
  cfg.state = f.state;
  if (f.backend == "tfidf") {
    cfg.backend.kind = BackendKind::TfIdf;
  } else if (f.backend == "remote") {
    cfg.backend.kind = BackendKind::Remote;
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown backend '" + f.backend + "'");
  }
  cfg.backend.model_id = f.model;
  cfg.backend.endpoint_url = f.endpoint;
  cfg.backend.dimensions = f.dimensions;
  cfg.backend.batch_size = f.batch_size;
  cfg.backend.max_parallel = f.max_parallel;
  cfg.backend.max_retries = f.max_retries;
  if (cfg.backend.kind == BackendKind::Remote) {
    if (const char* key = std::getenv(f.api_key_env.c_str())) cfg.backend.api_key = key;
  }
  cfg.serialization.budget_chars = f.budget;
  cfg.serialization.shuffle = !f.no_shuffle;
  cfg.selector.k = f.k;
  cfg.selector.metric = cli::parse_metric(f.metric);
  cfg.selector.weighting = cli::parse_weighting(f.weighting);
  cfg.seeds = cli::parse_seeds(f.seeds);
  cfg.alpha = f.alpha;
  cfg.selectors.clear();
  for (auto& s : text::split(f.selectors, ',')) {
    if (!s.empty()) cfg.selectors.push_back(s);
  }
  cfg.format = report::parse_format(f.format);
  cfg.jobs = f.jobs == 0 ? 1 : f.jobs;
  cfg.forest.n_trees = f.trees;
  cfg.forest.seed = f.forest_seed;
  cfg.forest.jobs = 1;
  return cfg;
}

void add_common(CLI::App& app, Flags& f) {
  app.add_option("--scenario-dir", f.scenario_dir, "ASlib scenario directory");
  app.add_option("--manifest", f.manifest, "instance manifest (<id>\\t<path>...)");
  app.add_option("--cache-dir", f.cache_dir, "embedding cache directory")->capture_default_str();
  app.add_option("--backend", f.backend, "embedding backend")->check(CLI::IsMember({"remote", "tfidf"}))->capture_default_str();
  app.add_option("--model", f.model, "remote embedding model id");
  app.add_option("--endpoint", f.endpoint, "remote endpoint base URL (OpenAI-compatible)");
  app.add_option("--api-key-env", f.api_key_env, "environment variable holding the API key")->capture_default_str();
  app.add_option("--dimensions", f.dimensions, "TF-IDF dimensionality")->capture_default_str();
  app.add_option("--batch-size", f.batch_size, "texts per remote request")->capture_default_str();
  app.add_option("--max-parallel", f.max_parallel, "concurrent remote requests")->capture_default_str();
  app.add_option("--max-retries", f.max_retries, "retries for transient remote failures")->capture_default_str();
  app.add_option("--budget", f.budget, "serialization budget in characters")->capture_default_str();
  app.add_option("--seeds", f.seeds, "comma-separated shuffle seeds")->capture_default_str();
  app.add_flag("--no-shuffle", f.no_shuffle, "keep raw line order");
  app.add_option("--k", f.k, "neighbors")->capture_default_str();
  app.add_option("--metric", f.metric, "distance")->check(CLI::IsMember({"manhattan", "cosine"}))->capture_default_str();
  app.add_option("--weighting", f.weighting, "neighbor weighting")->check(CLI::IsMember({"inverse", "uniform"}))->capture_default_str();
  app.add_option("--alpha", f.alpha, "hybrid weight of the zerofolio scores")->capture_default_str();
  app.add_option("--selectors", f.selectors, "sbs, rf, zf, zf-v2, zf-concat, hybrid")->capture_default_str();
  app.add_option("--trees", f.trees, "random forest size")->capture_default_str();
  app.add_option("--forest-seed", f.forest_seed, "random forest seed")->capture_default_str();
  app.add_option("--output", f.output, "output file (default: standard output)");
  app.add_option("--format", f.format, "report format")->check(CLI::IsMember({"csv", "markdown", "json"}))->capture_default_str();
  app.add_option("--state", f.state, "trained selector state file");
  app.add_option("--jobs", f.jobs, "worker threads")->capture_default_str();
}

void print_or_write(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-free algorithm selection from instance-file embeddings"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::string> select_files;

  add_common(app, flags);
  app.add_option("--grid", flags.grid, "ablation dimensions: shuffle,metric,weighting,k,seeds,naive (default all)");
  app.add_option("--input", flags.inputs, "JSON report(s) for the report command");
  app.set_config("--config", "", "TOML-style key = value file; flags override it");

  auto* embed = app.add_subcommand("embed", "serialize and embed every manifest instance into the cache");
  auto* evaluate = app.add_subcommand("evaluate", "cross-validate selectors on a scenario");
  auto* ablate = app.add_subcommand("ablate", "one-dimension-at-a-time ablation of the k-NN selector");
  auto* select = app.add_subcommand("select", "pick an algorithm for a new instance");
  auto* report = app.add_subcommand("report", "re-emit saved JSON reports");
  for (auto* sub : {embed, evaluate, ablate, select, report}) {
    sub->fallthrough();
    sub->footer("Shared options (--scenario-dir, --k, --config, ...) are listed by `zerofolio --help`.");
  }
  select->add_option("files", select_files, "instance file(s), model before data")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kSuccess : cli::kUsageError;
  }

  try {
    const RunConfig cfg = to_config(flags);
    if (embed->parsed()) {
      const auto s = cli::cmd_embed(cfg);
      std::cout << "embedded " << s.embedded << ", cached " << s.cached << ", failed " << s.failed << "\n";
      for (const auto& f : s.failures) {
        std::cerr << "failed: " << f.instance << " (seed " << f.seed << "): " << f.message << "\n";
      }
      return s.failed == 0 ? cli::kSuccess : cli::kPartialFailure;
    }
    if (evaluate->parsed()) {
      const auto r = cli::cmd_evaluate(cfg);
      print_or_write(cfg, report::emit_report(r, cfg.format));
      return cli::kSuccess;
    }
    if (ablate->parsed()) {
      std::vector<std::string> grid;
      for (auto& d : text::split(flags.grid, ',')) {
        if (!d.empty()) grid.push_back(d);
      }
      print_or_write(cfg, cli::cmd_ablate(cfg, grid));
      return cli::kSuccess;
    }
    if (select->parsed()) {
      std::vector<std::filesystem::path> files(select_files.begin(), select_files.end());
      const auto out = cli::cmd_select(cfg, files);
      std::cout << "selected: " << out.algorithm_name << "\n";
      for (std::size_t a = 0; a < out.algorithms.size(); ++a) {
        std::cout << "  " << out.algorithms[a] << "\t" << text::format_double(out.scores[a]) << "\n";
      }
      return cli::kSuccess;
    }
    if (report->parsed()) {
      if (flags.inputs.empty()) throw Error(ErrorKind::InvalidArgument, "report needs --input");
      std::vector<std::filesystem::path> inputs(flags.inputs.begin(), flags.inputs.end());
      const auto text_out = cli::cmd_report(inputs, report::parse_format(flags.format));
      if (flags.output.empty()) {
        std::cout << text_out;
      } else {
        text::write_file_atomic(flags.output, text_out);
      }
      return cli::kSuccess;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kDataError;
  }
  return cli::kUsageError;
}
