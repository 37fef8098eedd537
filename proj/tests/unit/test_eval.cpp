#include <doctest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "zerofolio/baseline.hpp"
#include "zerofolio/error.hpp"
#include "zerofolio/eval.hpp"
#include "zerofolio/tfidf.hpp"

using namespace zerofolio;
using namespace zerofolio::eval;
using namespace zerofolio::testing;

namespace {

double mean_vbs(const aslib::Scenario& sc) {
  double total = 0.0;
  for (std::size_t i = 0; i < sc.instances.size(); ++i) total += virtual_best_par10(sc, i);
  return total / static_cast<double>(sc.instances.size());
}

EvaluationContext context(const aslib::Scenario& sc, const FoldEmbedder* embedder = nullptr) {
  EvaluationContext ctx;
  ctx.scenario = &sc;
  ctx.embedder = embedder;
  return ctx;
}

}  // namespace

TEST_CASE("overall PAR10 pools instances") {
  std::vector<FoldResult> folds(2);
  folds[0].per_instance = {{0, 0, 10.0}};
  folds[1].per_instance = {{1, 0, 20.0}, {2, 0, 20.0}, {3, 0, 20.0}};
  CHECK(overall_par10(folds) == 17.5);
  CHECK(folds[0].mean_par10() == 10.0);

  std::vector<FoldResult> single(1);
  single[0].per_instance = {{0, 1, 42.5}};
  CHECK(overall_par10(single) == 42.5);
}

TEST_CASE("gap closed examples") {
  CHECK(gap_closed(3066, 1010, 271) == doctest::Approx(73.5599284436));
  CHECK(std::lround(gap_closed(3066, 1010, 271)) == 74);
  CHECK(std::lround(gap_closed(2965, 3186, 1833)) == -20);
  CHECK(gap_closed(500, 20, 20) == 100.0);
  CHECK_THROWS_AS(gap_closed(10, 5, 10), Error);
  CHECK_THROWS_AS(gap_closed(10, 5, 20), Error);
  SplitMix64 rng(10);
  for (int t = 0; t < 100; ++t) {
    const double vbs = rng.unit() * 100, sbs = vbs + 1 + rng.unit() * 1000, alg = rng.unit() * 2000;
    const double c = 0.01 + rng.unit() * 100;
    CHECK(gap_closed(sbs * c, alg * c, vbs * c) == doctest::Approx(gap_closed(sbs, alg, vbs)).epsilon(1e-9));
  }
}

TEST_CASE("sbs picks the training-fold single best") {
  // Fold 1 training (fold 2) favours algo1, fold 2 training (fold 1) favours algo0.
  auto sc = make_scenario({{1, 50}, {2, 60}, {90, 3}, {80, 4}}, {1, 1, 2, 2});
  auto results = cross_validate(context(sc), SbsSpec{});
  REQUIRE(results.size() == 2);
  for (const auto& o : results[0].per_instance) CHECK(o.algorithm == 1);
  for (const auto& o : results[1].per_instance) CHECK(o.algorithm == 0);
}

TEST_CASE("oracle reaches the mean VBS") {
  auto cs = make_cluster_scenario(3, 10, 5, 1, 0.5);
  auto results = cross_validate(context(cs.scenario), OracleSpec{});
  CHECK(overall_par10(results) == doctest::Approx(mean_vbs(cs.scenario)).epsilon(1e-12));
}

TEST_CASE("zerofolio recovers perfectly clustered scenarios") {
  auto cs = make_cluster_scenario(4, 20, 10, 7);
  auto ctx = context(cs.scenario, &cs.embedder);
  auto zf = cross_validate(ctx, ZeroFolioSpec{});
  CHECK(overall_par10(zf) == doctest::Approx(mean_vbs(cs.scenario)).epsilon(1e-12));
  auto sbs = cross_validate(ctx, SbsSpec{});
  CHECK(overall_par10(sbs) > overall_par10(zf));
}

TEST_CASE("training never sees the test fold") {
  auto cs = make_cluster_scenario(3, 12, 4, 2);
  auto ctx = context(cs.scenario, &cs.embedder);
  std::size_t calls = 0;
  ctx.observer = [&](int fold, std::span<const std::size_t> train, std::span<const std::size_t> test) {
    ++calls;
    std::set<std::size_t> tr(train.begin(), train.end());
    for (auto i : test) {
      CHECK(tr.count(i) == 0);
      CHECK(cs.scenario.folds[i] == fold);
    }
    for (auto i : train) CHECK(cs.scenario.folds[i] != fold);
    CHECK(train.size() + test.size() == cs.scenario.instances.size());
  };
  cross_validate(ctx, ZeroFolioSpec{});
  CHECK(calls == 4);
}

TEST_CASE("availability restricts test and training sets") {
  auto cs = make_cluster_scenario(2, 10, 2, 3);
  auto ctx = context(cs.scenario, &cs.embedder);
  ctx.available.assign(cs.scenario.instances.size(), true);
  for (std::size_t i = 0; i < ctx.available.size(); i += 3) ctx.available[i] = false;
  auto results = cross_validate(ctx, ZeroFolioSpec{});
  std::size_t tested = 0;
  for (const auto& f : results) {
    for (const auto& o : f.per_instance) {
      CHECK(ctx.available[o.instance]);
      ++tested;
    }
  }
  CHECK(tested == 13);

  ctx.available.assign(cs.scenario.instances.size(), false);
  try {
    cross_validate(ctx, ZeroFolioSpec{});
    FAIL("expected NoEmbeddableInstances");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoEmbeddableInstances);
  }
}

TEST_CASE("evaluate produces bounded, deterministic reports") {
  auto cs = make_cluster_scenario(3, 15, 5, 4, 0.2, {0, 1});
  // Features: the cluster index plus noise, with one instance entirely missing.
  cs.scenario.feature_names = {"f0", "f1"};
  SplitMix64 rng(1);
  for (std::size_t i = 0; i < cs.scenario.instances.size(); ++i) {
    cs.scenario.features.push_back({static_cast<double>(cs.cluster[i]) + 0.1 * rng.unit(), rng.unit()});
  }
  cs.scenario.features[5] = {std::nullopt, std::nullopt};
  cs.scenario.finalize();

  auto ctx = context(cs.scenario, &cs.embedder);
  ZeroFolioSpec v2;
  v2.seeds = {0, 1};
  RandomForestSpec rf;
  rf.config.n_trees = 20;
  HybridSpec hybrid;
  hybrid.forest = rf;
  const std::vector<NamedSelector> selectors{
      {"sbs", SbsSpec{}}, {"rf", rf}, {"zf", ZeroFolioSpec{}}, {"zf-v2", v2}, {"hybrid", hybrid}};
  const auto report = evaluate(ctx, selectors);
  CHECK(report.scenario_name == "synthetic");
  CHECK(report.instances_total == 45);
  CHECK(report.instances_embedded == 45);
  CHECK(report.selectors.size() == 5);
  CHECK(report.vbs_folds.size() == 5);
  CHECK(report.significance.size() == 10);
  CHECK(report.sbs_par10 == report.sbs_par10_full);
  for (const auto& s : report.selectors) {
    CHECK(s.overall_par10 >= report.vbs_par10);
    CHECK(s.overall_par10 <= 10 * cs.scenario.cutoff_seconds);
    REQUIRE(s.gap_closed);
    CHECK(*s.gap_closed <= 100.0);
    CHECK(s.folds.size() == 5);
  }
  CHECK(report.selectors[0].overall_par10 == report.sbs_par10);
  for (const auto& p : report.significance) {
    CHECK(p.folds == 5);
    CHECK(p.p_value <= 1.0);
  }
  CHECK(evaluate(ctx, selectors) == report);
  ctx.jobs = 3;
  CHECK(evaluate(ctx, selectors) == report);
}

TEST_CASE("tfidf fold embedder fits on training texts only") {
  auto sc = make_scenario({{1, 100}, {1, 100}, {100, 1}, {100, 1}}, {1, 2, 1, 2});
  std::map<std::uint64_t, std::vector<std::string>> texts{{0, {"aaaa", "aaab", "zzzz", "zzzy"}}};
  BackendConfig cfg;
  cfg.dimensions = 64;
  TfIdfFoldEmbedder embedder(cfg, texts);
  const std::vector<std::size_t> train{1, 3}, test{0, 2};
  auto fe = embedder.embed(train, test, 0);
  CHECK(fe.train.size() == 2);
  CHECK(fe.test.size() == 2);
  CHECK(fe.train[0] == TfIdfModel::fit({"aaab", "zzzy"}, cfg).embed("aaab"));
  auto results = cross_validate(context(sc, &embedder), ZeroFolioSpec{});
  CHECK(overall_par10(results) == 1.0);
}
