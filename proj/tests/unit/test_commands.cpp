#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>

#include "fixtures.hpp"
#include "zerofolio/commands.hpp"
#include "zerofolio/error.hpp"
#include "zerofolio/report.hpp"
#include "zerofolio/text.hpp"

using namespace zerofolio;
using namespace zerofolio::cli;
using namespace zerofolio::testing;

namespace {

/// TINY scenario plus instance files for i1..i3 (i4 has no file).
struct Workspace {
  TempDir dir;
  RunConfig cfg;

  Workspace() {
    write_small_scenario(dir / "scenario");
    write_text(dir / "files/i1.cnf", "p cnf 3 2\n1 -2 0\n2 3 0\n");
    write_text(dir / "files/i2.cnf", "p cnf 50 9\n1 2 3 0\n-4 -5 6 0\n7 8 -9 0\n10 -11 0\n");
    write_text(dir / "files/i3.mzn", "var 1..9: x;\nconstraint x > 3;\nsolve minimize x;\n");
    write_text(dir / "files/i3.dzn", "n = 4;\n");
    write_text(dir / "manifest.tsv", "i1\tfiles/i1.cnf\ni2\tfiles/i2.cnf\ni3\tfiles/i3.mzn\tfiles/i3.dzn\n");
    cfg.scenario_dir = dir / "scenario";
    cfg.manifest = dir / "manifest.tsv";
    cfg.cache_dir = dir / "cache";
    cfg.backend.dimensions = 256;
    cfg.forest.n_trees = 10;
  }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ZEROFOLIO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("embed fills the cache and is idempotent") {
  Workspace ws;
  ws.cfg.seeds = {0, 1};
  auto first = cmd_embed(ws.cfg);
  CHECK(first.embedded == 6);
  CHECK(first.cached == 0);
  CHECK(first.failed == 0);
  auto second = cmd_embed(ws.cfg);
  CHECK(second.embedded == 0);
  CHECK(second.cached == 6);
}

TEST_CASE("corrupt cache records are rebuilt") {
  Workspace ws;
  cmd_embed(ws.cfg);
  std::size_t damaged = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(ws.cfg.cache_dir)) {
    if (entry.path().extension() != ".vec") continue;
    write_text(entry.path(), "xx");
    ++damaged;
  }
  CHECK(damaged == 3);
  auto s = cmd_embed(ws.cfg);
  CHECK(s.embedded == 3);
  CHECK(s.failed == 0);
  CHECK(cmd_embed(ws.cfg).cached == 3);
}

TEST_CASE("one unreadable file fails only its own instance") {
  Workspace ws;
  ws.cfg.seeds = {0, 1};
  write_text(ws.dir / "manifest.tsv", "i1\tfiles/i1.cnf\ni2\tfiles/missing.cnf\ni3\tfiles/i3.mzn\n");
  auto s = cmd_embed(ws.cfg);
  CHECK(s.embedded == 4);
  CHECK(s.failed == 2);
  for (const auto& f : s.failures) CHECK(f.instance == "i2");
}

TEST_CASE("evaluate is bounded and byte-identical across runs") {
  Workspace ws;
  ws.cfg.selectors = {"sbs", "zf"};
  ws.cfg.output = ws.dir / "a.csv";
  const auto report = cmd_evaluate(ws.cfg);
  CHECK(report.instances_total == 4);
  CHECK(report.instances_embedded == 3);
  for (const auto& s : report.selectors) {
    CHECK(s.overall_par10 >= report.vbs_par10);
    CHECK(s.overall_par10 <= 1000.0);
  }
  ws.cfg.output = ws.dir / "b.csv";
  cmd_evaluate(ws.cfg);
  CHECK(text::read_file(ws.dir / "a.csv") == text::read_file(ws.dir / "b.csv"));

  ws.cfg.format = report::Format::Json;
  ws.cfg.output = ws.dir / "a.json";
  cmd_evaluate(ws.cfg);
  ws.cfg.output = ws.dir / "b.json";
  cmd_evaluate(ws.cfg);
  CHECK(text::read_file(ws.dir / "a.json") == text::read_file(ws.dir / "b.json"));
}

TEST_CASE("hybrid row uses the configured alpha") {
  Workspace ws;
  ws.cfg.selectors = {"zf", "rf", "hybrid"};
  ws.cfg.alpha = 0.25;
  const auto report = cmd_evaluate(ws.cfg);
  REQUIRE(report.selectors.size() == 3);
  CHECK(report.selectors[2].name == "hybrid");
  const auto spec = std::get<eval::HybridSpec>(make_selector("hybrid", ws.cfg).spec);
  CHECK(spec.alpha == 0.25);
  ws.cfg.alpha = 1.5;
  CHECK_THROWS_AS(make_selector("hybrid", ws.cfg), Error);
  CHECK_THROWS_AS(make_selector("nonsense", ws.cfg), Error);
}

TEST_CASE("ablation rows") {
  Workspace ws;
  const auto all_csv = cmd_ablate(ws.cfg, {});
  const auto all = text::split_lines(all_csv);
  REQUIRE(all.size() == 9);
  CHECK(all[0] == "scenario,dimension,variant,shuffle,metric,weighting,k,seeds,par10,gap_closed");
  CHECK(all[1].substr(0, 23) == "TINY,standard,standard,");
  CHECK(all[8].find("TINY,naive,naive,false,cosine,uniform,10,0,") == 0);
  const auto metric_csv = cmd_ablate(ws.cfg, {"metric"});
  const auto metric = text::split_lines(metric_csv);
  CHECK(metric.size() == 3);
  CHECK(metric[2].find(",cosine,") != std::string::npos);
  CHECK_THROWS_AS(cmd_ablate(ws.cfg, {"colour"}), Error);
}

TEST_CASE("select reuses the saved state") {
  Workspace ws;
  ws.cfg.seeds = {0, 1};
  ws.cfg.state = ws.dir / "state.json";
  cmd_embed(ws.cfg);
  CHECK(cmd_select(ws.cfg, {ws.dir / "files/i1.cnf"}).algorithm_name == "fast");
  CHECK(cmd_select(ws.cfg, {ws.dir / "files/i2.cnf"}).algorithm_name == "slow");
  const auto multi = cmd_select(ws.cfg, {ws.dir / "files/i3.mzn", ws.dir / "files/i3.dzn"});
  CHECK(multi.algorithm_name == "fast");
  CHECK(multi.scores.size() == 2);

  write_text(ws.dir / "empty.cnf", "");
  const auto empty = cmd_select(ws.cfg, {ws.dir / "empty.cnf"});
  CHECK(empty.algorithm < 2);

  RunConfig no_state = ws.cfg;
  no_state.state = ws.dir / "absent.json";
  CHECK_THROWS_AS(cmd_select(no_state, {ws.dir / "files/i1.cnf"}), Error);
}

TEST_CASE("report re-emits saved JSON") {
  Workspace ws;
  ws.cfg.selectors = {"sbs", "zf"};
  ws.cfg.format = report::Format::Json;
  ws.cfg.output = ws.dir / "r.json";
  const auto report = cmd_evaluate(ws.cfg);
  CHECK(cmd_report({ws.dir / "r.json"}, report::Format::Csv) == report::to_csv(report));
  const std::string md = cmd_report({ws.dir / "r.json", ws.dir / "r.json"}, report::Format::Markdown);
  CHECK(text::split_lines(md).size() == 4);
}

TEST_CASE("exit codes") {
  Workspace ws;
  const std::string common = "--scenario-dir " + ws.cfg.scenario_dir.string() + " --manifest " +
                             ws.cfg.manifest.string() + " --cache-dir " + ws.cfg.cache_dir.string() +
                             " --dimensions 128 --trees 5";
  CHECK(run_cli("") == kUsageError);
  CHECK(run_cli("evaluate --k notanumber") == kUsageError);
  CHECK(run_cli("evaluate " + common + " --selectors sbs") == kSuccess);
  CHECK(run_cli("evaluate " + common + " --selectors bogus") == kUsageError);
  CHECK(run_cli("evaluate " + common + " --selectors hybrid --alpha 2") == kUsageError);
  CHECK(run_cli("evaluate --scenario-dir " + (ws.dir / "nowhere").string()) == kDataError);
  CHECK(run_cli("embed " + common + " --backend remote") == kUsageError);
  CHECK(run_cli("embed " + common + " --backend remote --model m --endpoint http://127.0.0.1:1 --max-retries 0") ==
        kPartialFailure);
  CHECK(run_cli("embed " + common) == kSuccess);
  write_text(ws.dir / "manifest.tsv", "i1\tfiles/i1.cnf\ni2\tfiles/gone.cnf\n");
  CHECK(run_cli("embed " + common) == kPartialFailure);
  CHECK(run_cli("select --state " + (ws.dir / "none.json").string() + " " + (ws.dir / "files/i1.cnf").string()) ==
        kDataError);
}

TEST_CASE("config file values apply and flags override them") {
  Workspace ws;
  write_text(ws.dir / "run.toml", "selectors = \"sbs,zf\"\nformat = \"json\"\ndimensions = 128\n");
  const std::string base = "evaluate --config " + (ws.dir / "run.toml").string() + " --scenario-dir " +
                            ws.cfg.scenario_dir.string() + " --manifest " + ws.cfg.manifest.string();
  REQUIRE(run_cli(base + " --output " + (ws.dir / "c.json").string()) == kSuccess);
  const auto parsed = report::from_json(text::read_file(ws.dir / "c.json"));
  CHECK(parsed.selectors.size() == 2);
  REQUIRE(run_cli(base + " --format csv --output " + (ws.dir / "c.csv").string()) == kSuccess);
  CHECK(text::read_file(ws.dir / "c.csv").rfind("scenario,selector,fold,instances,par10_mean\n", 0) == 0);
}
