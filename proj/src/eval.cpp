#include "zerofolio/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zerofolio/baseline.hpp"
#include "zerofolio/error.hpp"
#include "zerofolio/parallel.hpp"
#include "zerofolio/tfidf.hpp"
#include "zerofolio/wilcoxon.hpp"

namespace zerofolio::eval {

using aslib::Scenario;

void PrecomputedEmbedder::set(std::size_t instance, std::uint64_t seed, EmbeddingVector vec) {
  vectors_[{instance, seed}] = std::move(vec);
}

const EmbeddingVector& PrecomputedEmbedder::get(std::size_t instance, std::uint64_t seed) const {
  auto it = vectors_.find({instance, seed});
  if (it == vectors_.end()) {
    throw Error(ErrorKind::UnknownInstance,
                "no embedding for instance " + std::to_string(instance) + " with seed " + std::to_string(seed));
  }
  return it->second;
}

FoldEmbeddings PrecomputedEmbedder::embed(std::span<const std::size_t> train, std::span<const std::size_t> test,
                                          std::uint64_t seed) const {
  FoldEmbeddings out;
  out.train.reserve(train.size());
  out.test.reserve(test.size());
  for (auto i : train) out.train.push_back(get(i, seed));
  for (auto i : test) out.test.push_back(get(i, seed));
  return out;
}

TfIdfFoldEmbedder::TfIdfFoldEmbedder(BackendConfig config, std::map<std::uint64_t, std::vector<std::string>> texts)
    : config_(std::move(config)), texts_(std::move(texts)) {
  config_.validate();
}

FoldEmbeddings TfIdfFoldEmbedder::embed(std::span<const std::size_t> train, std::span<const std::size_t> test,
                                        std::uint64_t seed) const {
  auto it = texts_.find(seed);
  if (it == texts_.end()) throw Error(ErrorKind::InvalidArgument, "no serialized texts for seed " + std::to_string(seed));
  const auto& texts = it->second;
  std::vector<std::string> corpus;
  corpus.reserve(train.size());
  for (auto i : train) corpus.push_back(texts.at(i));
  const auto model = TfIdfModel::fit(corpus, config_);
  FoldEmbeddings out;
  for (const auto& t : corpus) out.train.push_back(model.embed(t));
  for (auto i : test) out.test.push_back(model.embed(texts.at(i)));
  return out;
}

double FoldResult::mean_par10() const {
  if (per_instance.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& o : per_instance) sum += o.par10;
  return sum / static_cast<double>(per_instance.size());
}

namespace {

struct Fold {
  int number = 0;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

std::vector<Fold> make_folds(const EvaluationContext& ctx) {
  const Scenario& sc = *ctx.scenario;
  std::vector<Fold> folds;
  for (int f = 1; f <= sc.fold_count(); ++f) {
    Fold fold;
    fold.number = f;
    for (std::size_t i = 0; i < sc.instances.size(); ++i) {
      if (!ctx.available.empty() && !ctx.available[i]) continue;
      (sc.folds[i] == f ? fold.test : fold.train).push_back(i);
    }
    if (!fold.test.empty()) folds.push_back(std::move(fold));
  }
  return folds;
}

std::vector<std::vector<double>> par10_rows(const Scenario& sc, std::span<const std::size_t> instances) {
  std::vector<std::vector<double>> rows;
  rows.reserve(instances.size());
  for (auto i : instances) rows.push_back(sc.par10_row(i));
  return rows;
}

bool has_any_feature(const FeatureRow& row) {
  return std::any_of(row.begin(), row.end(), [](const auto& v) { return v.has_value(); });
}

/// Voted k-NN scores for every test instance of a fold.
std::vector<AlgorithmScores> zerofolio_scores(const EvaluationContext& ctx, const ZeroFolioSpec& spec,
                                              const Fold& fold) {
  const Scenario& sc = *ctx.scenario;
  if (ctx.embedder == nullptr) throw Error(ErrorKind::InvalidArgument, "zerofolio selector needs an embedder");
  if (spec.seeds.empty()) throw Error(ErrorKind::InvalidArgument, "zerofolio selector needs at least one seed");
  if (spec.concat_features && !sc.has_features()) {
    throw Error(ErrorKind::InconsistentScenario, "feature concatenation needs feature_values.arff");
  }

  std::vector<std::vector<double>> train_features, test_features;
  if (spec.concat_features) {
    std::vector<FeatureRow> rows;
    for (auto i : fold.train) rows.push_back(sc.features[i]);
    const auto pre = fit_preprocessor(rows);
    for (auto i : fold.train) train_features.push_back(apply_preprocessor(pre, sc.features[i]));
    for (auto i : fold.test) test_features.push_back(apply_preprocessor(pre, sc.features[i]));
  }

  std::vector<std::vector<AlgorithmScores>> per_instance(fold.test.size());
  for (auto seed : spec.seeds) {
    auto emb = ctx.embedder->embed(fold.train, fold.test, seed);
    if (emb.train.size() != fold.train.size() || emb.test.size() != fold.test.size()) {
      throw Error(ErrorKind::LengthMismatch, "embedder returned the wrong number of vectors");
    }
    if (spec.concat_features) {
      for (std::size_t t = 0; t < emb.train.size(); ++t) emb.train[t] = concat_features(emb.train[t], train_features[t]);
      for (std::size_t t = 0; t < emb.test.size(); ++t) emb.test[t] = concat_features(emb.test[t], test_features[t]);
    }
    const TrainedSelector selector(std::move(emb.train), par10_rows(sc, fold.train), spec.config);
    for (std::size_t t = 0; t < fold.test.size(); ++t) {
      per_instance[t].push_back(selector.score_algorithms(emb.test[t]));
    }
  }
  std::vector<AlgorithmScores> out;
  out.reserve(per_instance.size());
  for (const auto& s : per_instance) out.push_back(vote_scores(s));
  return out;
}

/// RF scores (1 - vote fraction, lower is better) for every test instance.
/// Instances without any observed feature fall back to the fold SBS.
std::vector<AlgorithmScores> forest_scores(const EvaluationContext& ctx, const RandomForestSpec& spec,
                                           const Fold& fold) {
  const Scenario& sc = *ctx.scenario;
  if (!sc.has_features()) throw Error(ErrorKind::InconsistentScenario, "random forest needs feature_values.arff");
  const std::size_t n_algos = sc.algorithms.size();
  const std::size_t sbs = single_best(sc, fold.train);
  AlgorithmScores fallback{std::vector<double>(n_algos, 1.0)};
  fallback.scores[sbs] = 0.0;

  std::vector<FeatureRow> raw;
  std::vector<std::size_t> labels;
  for (auto i : fold.train) {
    if (!has_any_feature(sc.features[i])) continue;
    raw.push_back(sc.features[i]);
    labels.push_back(best_algorithm(sc.par10_row(i)));
  }
  std::vector<AlgorithmScores> out(fold.test.size(), fallback);
  if (raw.empty()) return out;

  const auto pre = fit_preprocessor(raw);
  std::vector<std::vector<double>> rows;
  rows.reserve(raw.size());
  for (const auto& r : raw) rows.push_back(apply_preprocessor(pre, r));
  const auto model = rf_train(rows, labels, n_algos, spec.config);
  for (std::size_t t = 0; t < fold.test.size(); ++t) {
    const auto& feats = sc.features[fold.test[t]];
    if (!has_any_feature(feats)) continue;
    auto votes = model.vote_fractions(apply_preprocessor(pre, feats));
    for (auto& v : votes) v = 1.0 - v;
    out[t] = AlgorithmScores{std::move(votes)};
  }
  return out;
}

std::vector<std::size_t> choose(const EvaluationContext& ctx, const SelectorSpec& spec, const Fold& fold) {
  const Scenario& sc = *ctx.scenario;
  std::vector<std::size_t> picks(fold.test.size());
  auto from_scores = [&](const std::vector<AlgorithmScores>& scores) {
    for (std::size_t t = 0; t < scores.size(); ++t) picks[t] = select(scores[t]);
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SbsSpec>) {
          std::fill(picks.begin(), picks.end(), single_best(sc, fold.train));
        } else if constexpr (std::is_same_v<T, OracleSpec>) {
          for (std::size_t t = 0; t < fold.test.size(); ++t) picks[t] = best_algorithm(sc.par10_row(fold.test[t]));
        } else if constexpr (std::is_same_v<T, ZeroFolioSpec>) {
          from_scores(zerofolio_scores(ctx, s, fold));
        } else if constexpr (std::is_same_v<T, RandomForestSpec>) {
          from_scores(forest_scores(ctx, s, fold));
        } else {
          if (!(s.alpha >= 0.0 && s.alpha <= 1.0)) throw Error(ErrorKind::InvalidAlpha, "alpha must lie in [0, 1]");
          const auto zf = zerofolio_scores(ctx, s.zerofolio, fold);
          const auto rf = forest_scores(ctx, s.forest, fold);
          std::vector<AlgorithmScores> fused;
          fused.reserve(zf.size());
          for (std::size_t t = 0; t < zf.size(); ++t) fused.push_back(hybrid_soft_vote(zf[t], rf[t], s.alpha));
          from_scores(fused);
        }
      },
      spec);
  return picks;
}

}  // namespace

std::vector<FoldResult> cross_validate(const EvaluationContext& ctx, const SelectorSpec& spec) {
  if (ctx.scenario == nullptr) throw Error(ErrorKind::InvalidArgument, "evaluation context has no scenario");
  const Scenario& sc = *ctx.scenario;
  if (!ctx.available.empty() && ctx.available.size() != sc.instances.size()) {
    throw Error(ErrorKind::LengthMismatch, "availability mask does not match the scenario");
  }
  const auto folds = make_folds(ctx);
  if (folds.empty()) throw Error(ErrorKind::NoEmbeddableInstances, sc.name + ": no test instance is available");

  std::vector<FoldResult> results(folds.size());
  parallel_for(folds.size(), ctx.jobs, [&](std::size_t k) {
    const Fold& fold = folds[k];
    if (fold.train.empty()) {
      throw Error(ErrorKind::EmptyTrainingSet, sc.name + ": fold " + std::to_string(fold.number) + " has no training instances");
    }
    for (auto i : fold.train) {
      if (sc.folds[i] == fold.number) throw std::logic_error("test-fold instance leaked into training");
    }
    if (ctx.observer) ctx.observer(fold.number, fold.train, fold.test);
    const auto picks = choose(ctx, spec, fold);
    FoldResult& out = results[k];
    out.fold = fold.number;
    out.per_instance.reserve(fold.test.size());
    for (std::size_t t = 0; t < fold.test.size(); ++t) {
      const std::size_t i = fold.test[t];
      out.per_instance.push_back({i, picks[t], sc.par10(i, picks[t])});
    }
  });
  return results;
}

double overall_par10(std::span<const FoldResult> results) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : results) {
    for (const auto& o : r.per_instance) sum += o.par10;
    count += r.per_instance.size();
  }
  if (count == 0) throw Error(ErrorKind::InvalidArgument, "overall PAR10 of an empty result set");
  return sum / static_cast<double>(count);
}

double gap_closed(double sbs, double alg, double vbs) {
  if (!(sbs > vbs)) {
    throw Error(ErrorKind::DegenerateGap, "SBS (" + std::to_string(sbs) + ") must exceed VBS (" + std::to_string(vbs) + ")");
  }
  return 100.0 * (sbs - alg) / (sbs - vbs);
}

SelectorSummary summarize(const std::string& name, std::span<const FoldResult> results) {
  SelectorSummary s;
  s.name = name;
  for (const auto& r : results) s.folds.push_back({r.fold, r.per_instance.size(), r.mean_par10()});
  s.overall_par10 = overall_par10(results);
  return s;
}

namespace {

PairSignificance compare(const SelectorSummary& a, const SelectorSummary& b) {
  std::vector<double> x, y;
  for (const auto& fa : a.folds) {
    for (const auto& fb : b.folds) {
      if (fa.fold == fb.fold) {
        x.push_back(fa.par10_mean);
        y.push_back(fb.par10_mean);
      }
    }
  }
  PairSignificance p{a.name, b.name, x.size(), 0.0, 1.0};
  if (x.empty()) return p;
  const auto w = wilcoxon_signed_rank(x, y);
  p.statistic = w.statistic;
  p.p_value = w.p_value;
  return p;
}

}  // namespace

EvaluationReport evaluate(const EvaluationContext& ctx, std::span<const NamedSelector> selectors) {
  if (ctx.scenario == nullptr) throw Error(ErrorKind::InvalidArgument, "evaluation context has no scenario");
  const Scenario& sc = *ctx.scenario;
  EvaluationReport report;
  report.scenario_name = sc.name;
  report.instances_total = sc.instances.size();
  report.instances_embedded =
      ctx.available.empty() ? sc.instances.size()
                            : static_cast<std::size_t>(std::count(ctx.available.begin(), ctx.available.end(), true));

  const auto oracle = cross_validate(ctx, OracleSpec{});
  const auto sbs = cross_validate(ctx, SbsSpec{});
  report.vbs_par10 = overall_par10(oracle);
  report.sbs_par10 = overall_par10(sbs);
  report.vbs_folds = summarize("vbs", oracle).folds;

  EvaluationContext full = ctx;
  full.available.clear();
  full.observer = nullptr;
  report.sbs_par10_full = overall_par10(cross_validate(full, SbsSpec{}));
  report.vbs_par10_full = overall_par10(cross_validate(full, OracleSpec{}));

  for (const auto& named : selectors) {
    const auto results = cross_validate(ctx, named.spec);
    for (const auto& r : results) {
      for (const auto& o : r.per_instance) {
        const double vbs = virtual_best_par10(sc, o.instance);
        if (o.par10 < vbs || o.par10 > 10.0 * sc.cutoff_seconds) {
          throw std::logic_error("selected PAR10 outside [VBS, 10 x cutoff]");
        }
      }
    }
    auto summary = summarize(named.name, results);
    if (report.sbs_par10 > report.vbs_par10) {
      summary.gap_closed = gap_closed(report.sbs_par10, summary.overall_par10, report.vbs_par10);
    }
    report.selectors.push_back(std::move(summary));
  }
  for (std::size_t a = 0; a < report.selectors.size(); ++a) {
    for (std::size_t b = a + 1; b < report.selectors.size(); ++b) {
      report.significance.push_back(compare(report.selectors[a], report.selectors[b]));
    }
  }
  return report;
}

}  // namespace zerofolio::eval
