#include "zerofolio/commands.hpp"

#include <algorithm>
#include <json.hpp>
#include <mutex>
#include <set>

#include "zerofolio/aslib.hpp"
#include "zerofolio/embedding_cache.hpp"
#include "zerofolio/parallel.hpp"
#include "zerofolio/remote_embedder.hpp"
#include "zerofolio/text.hpp"
#include "zerofolio/tfidf.hpp"

namespace zerofolio::cli {

using nlohmann::ordered_json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidAlpha:
      return kUsageError;
    case ErrorKind::AuthError:
    case ErrorKind::RateLimited:
    case ErrorKind::BackendError:
      return kBackendError;
    default:
      return kDataError;
  }
}

Metric parse_metric(const std::string& s) {
  if (s == "manhattan") return Metric::Manhattan;
  if (s == "cosine") return Metric::Cosine;
  throw Error(ErrorKind::InvalidArgument, "unknown metric '" + s + "'");
}

Weighting parse_weighting(const std::string& s) {
  if (s == "inverse") return Weighting::InverseDistance;
  if (s == "uniform") return Weighting::Uniform;
  throw Error(ErrorKind::InvalidArgument, "unknown weighting '" + s + "'");
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  for (const auto& part : text::split(s, ',')) {
    if (part.empty()) continue;
    try {
      std::size_t used = 0;
      const auto v = std::stoull(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      seeds.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "invalid seed '" + part + "'");
    }
  }
  return seeds;
}

namespace {

std::vector<std::uint64_t> zf_v2_seeds() { return {0, 1}; }

eval::ZeroFolioSpec zerofolio_spec(const RunConfig& cfg) {
  if (cfg.seeds.empty()) throw Error(ErrorKind::InvalidArgument, "the zerofolio selector needs at least one seed");
  return eval::ZeroFolioSpec{cfg.selector, cfg.seeds, false};
}

bool needs_embeddings(const eval::SelectorSpec& spec) {
  return std::holds_alternative<eval::ZeroFolioSpec>(spec) || std::holds_alternative<eval::HybridSpec>(spec);
}

std::vector<std::uint64_t> seeds_of(const eval::SelectorSpec& spec) {
  if (auto z = std::get_if<eval::ZeroFolioSpec>(&spec)) return z->seeds;
  if (auto h = std::get_if<eval::HybridSpec>(&spec)) return h->zerofolio.seeds;
  return {};
}

/// Serialized texts of the manifest-covered scenario instances.
struct InstanceTexts {
  std::vector<bool> available;                             // per scenario instance
  std::map<std::uint64_t, std::vector<std::string>> texts;  // seed -> per scenario instance
  std::vector<std::pair<std::size_t, std::string>> failures;
};

InstanceTexts load_texts(const aslib::Scenario& sc, const aslib::InstanceManifest& manifest,
                         const SerializationConfig& base, const std::vector<std::uint64_t>& seeds,
                         std::size_t jobs) {
  InstanceTexts out;
  const std::size_t n = sc.instances.size();
  out.available.assign(n, false);
  for (auto seed : seeds) out.texts[seed].assign(n, std::string());
  std::mutex mu;
  parallel_for(n, jobs, [&](std::size_t i) {
    auto entry = manifest.entries.find(sc.instances[i]);
    if (entry == manifest.entries.end()) return;
    std::vector<std::string> files;
    try {
      for (const auto& path : entry->second) files.push_back(text::read_file(path));
    } catch (const Error& e) {
      std::lock_guard lock(mu);
      out.failures.emplace_back(i, e.what());
      return;
    }
    std::vector<std::string> serialized;
    for (auto seed : seeds) {
      SerializationConfig c = base;
      c.seed = seed;
      serialized.push_back(serialize_instance(files, c));
    }
    std::lock_guard lock(mu);
    std::size_t k = 0;
    for (auto seed : seeds) out.texts[seed][i] = std::move(serialized[k++]);
    out.available[i] = true;
  });
  std::sort(out.failures.begin(), out.failures.end());
  return out;
}

std::string tfidf_model_id(const BackendConfig& backend, const std::vector<std::string>& corpus) {
  std::string digests;
  for (const auto& t : corpus) {
    const auto d = sha256(t);
    digests.append(reinterpret_cast<const char*>(d.data()), d.size());
  }
  return "tfidf-" + std::to_string(backend.dimensions) + "-" + std::to_string(backend.ngram_min) + "-" +
         std::to_string(backend.ngram_max) + "-" + to_hex(sha256(digests)).substr(0, 16);
}

/// Cached remote vectors for every available (instance, seed); fetches and
/// stores whatever is missing.
std::unique_ptr<eval::PrecomputedEmbedder> remote_embeddings(const RunConfig& cfg, const InstanceTexts& texts) {
  auto out = std::make_unique<eval::PrecomputedEmbedder>();
  std::vector<std::pair<std::size_t, std::uint64_t>> missing;
  std::vector<std::string> missing_texts;
  for (const auto& [seed, per_instance] : texts.texts) {
    for (std::size_t i = 0; i < per_instance.size(); ++i) {
      if (!texts.available[i]) continue;
      const auto key = CacheKey::for_text(per_instance[i], cfg.backend.model_id);
      if (auto v = cache_get(key, cfg.cache_dir)) {
        out->set(i, seed, std::move(*v));
      } else {
        missing.emplace_back(i, seed);
        missing_texts.push_back(per_instance[i]);
      }
    }
  }
  if (!missing.empty()) {
    const auto vectors = RemoteEmbedder(cfg.backend).embed(missing_texts);
    for (std::size_t m = 0; m < missing.size(); ++m) {
      cache_put(CacheKey::for_text(missing_texts[m], cfg.backend.model_id), vectors[m], cfg.cache_dir);
      out->set(missing[m].first, missing[m].second, vectors[m]);
    }
  }
  return out;
}

std::unique_ptr<eval::FoldEmbedder> make_embedder(const RunConfig& cfg, InstanceTexts texts) {
  if (cfg.backend.kind == BackendKind::TfIdf) {
    return std::make_unique<eval::TfIdfFoldEmbedder>(cfg.backend, std::move(texts.texts));
  }
  return remote_embeddings(cfg, texts);
}

void write_output(const RunConfig& cfg, const std::string& contents) {
  if (cfg.output.empty()) return;
  if (cfg.output.has_parent_path()) fs::create_directories(cfg.output.parent_path());
  text::write_file_atomic(cfg.output, contents);
}

struct Prepared {
  aslib::Scenario scenario;
  InstanceTexts texts;
};

Prepared prepare(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds, bool want_texts,
                 const SerializationConfig& serialization) {
  Prepared p{aslib::load_scenario(cfg.scenario_dir), {}};
  if (!want_texts) return p;
  if (cfg.manifest.empty()) throw Error(ErrorKind::InvalidArgument, "embedding-based selectors need --manifest");
  const auto manifest = aslib::load_manifest(cfg.manifest);
  p.texts = load_texts(p.scenario, manifest, serialization, seeds, cfg.jobs);
  if (!p.texts.failures.empty()) {
    const auto& [i, message] = p.texts.failures.front();
    throw Error(ErrorKind::Io, "instance '" + p.scenario.instances[i] + "': " + message);
  }
  return p;
}

}  // namespace

eval::NamedSelector make_selector(const std::string& name, const RunConfig& cfg) {
  const eval::RandomForestSpec forest{cfg.forest};
  if (name == "sbs") return {name, eval::SbsSpec{}};
  if (name == "rf") return {name, forest};
  if (name == "zf") return {name, zerofolio_spec(cfg)};
  if (name == "zf-v2") {
    auto spec = zerofolio_spec(cfg);
    spec.seeds = zf_v2_seeds();
    return {name, spec};
  }
  if (name == "zf-concat") {
    auto spec = zerofolio_spec(cfg);
    spec.concat_features = true;
    return {name, spec};
  }
  if (name == "hybrid") {
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw Error(ErrorKind::InvalidAlpha, "--alpha must lie in [0, 1]");
    return {name, eval::HybridSpec{cfg.alpha, zerofolio_spec(cfg), forest}};
  }
  throw Error(ErrorKind::InvalidArgument,
              "unknown selector '" + name + "' (expected sbs, rf, zf, zf-v2, zf-concat, hybrid)");
}

eval::EvaluationReport cmd_evaluate(const RunConfig& cfg) {
  cfg.backend.validate();
  std::vector<eval::NamedSelector> selectors;
  std::set<std::uint64_t> seed_set;
  bool want_texts = false;
  for (const auto& name : cfg.selectors) {
    selectors.push_back(make_selector(name, cfg));
    if (needs_embeddings(selectors.back().spec)) {
      want_texts = true;
      for (auto s : seeds_of(selectors.back().spec)) seed_set.insert(s);
    }
  }
  if (selectors.empty()) throw Error(ErrorKind::InvalidArgument, "no selectors requested");
  const std::vector<std::uint64_t> seeds(seed_set.begin(), seed_set.end());
  auto prepared = prepare(cfg, seeds, want_texts, cfg.serialization);

  eval::EvaluationContext ctx;
  ctx.scenario = &prepared.scenario;
  ctx.jobs = cfg.jobs;
  std::unique_ptr<eval::FoldEmbedder> embedder;
  if (want_texts) {
    ctx.available = prepared.texts.available;
    embedder = make_embedder(cfg, std::move(prepared.texts));
    ctx.embedder = embedder.get();
  }
  auto report = eval::evaluate(ctx, selectors);
  write_output(cfg, report::emit_report(report, cfg.format));
  return report;
}

std::string cmd_ablate(const RunConfig& cfg, const std::vector<std::string>& grid) {
  cfg.backend.validate();
  static const std::vector<std::string> kDimensions{"shuffle", "metric", "weighting", "k", "seeds", "naive"};
  for (const auto& d : grid) {
    if (std::find(kDimensions.begin(), kDimensions.end(), d) == kDimensions.end()) {
      throw Error(ErrorKind::InvalidArgument, "unknown ablation dimension '" + d + "'");
    }
  }
  auto wanted = [&](const std::string& d) { return grid.empty() || std::find(grid.begin(), grid.end(), d) != grid.end(); };
  if (cfg.seeds.empty()) throw Error(ErrorKind::InvalidArgument, "ablation needs at least one seed");

  struct Variant {
    std::string dimension;
    std::string name;
    bool shuffle;
    SelectorConfig selector;
    std::vector<std::uint64_t> seeds;
  };
  const std::uint64_t s0 = cfg.seeds.front();
  const Variant standard{"standard", "standard", cfg.serialization.shuffle, cfg.selector, {s0}};
  std::vector<Variant> variants{standard};
  auto vary = [&](std::string dim, std::string name, auto&& edit) {
    Variant v = standard;
    v.dimension = std::move(dim);
    v.name = std::move(name);
    edit(v);
    variants.push_back(std::move(v));
  };
  if (wanted("shuffle")) vary("serialization", "no-shuffle", [](Variant& v) { v.shuffle = false; });
  if (wanted("metric")) vary("metric", "cosine", [](Variant& v) { v.selector.metric = Metric::Cosine; });
  if (wanted("weighting")) vary("weighting", "uniform", [](Variant& v) { v.selector.weighting = Weighting::Uniform; });
  if (wanted("k")) {
    vary("k", "k=5", [](Variant& v) { v.selector.k = 5; });
    vary("k", "k=20", [](Variant& v) { v.selector.k = 20; });
  }
  if (wanted("seeds")) vary("seeds", "2-seed", [&](Variant& v) { v.seeds = {s0, s0 + 1}; });
  if (wanted("naive")) {
    vary("naive", "naive", [](Variant& v) {
      v.shuffle = false;
      v.selector.metric = Metric::Cosine;
      v.selector.weighting = Weighting::Uniform;
    });
  }

  std::set<std::uint64_t> seed_set;
  for (const auto& v : variants) seed_set.insert(v.seeds.begin(), v.seeds.end());
  const std::vector<std::uint64_t> seeds(seed_set.begin(), seed_set.end());

  auto scenario = aslib::load_scenario(cfg.scenario_dir);
  if (cfg.manifest.empty()) throw Error(ErrorKind::InvalidArgument, "ablation needs --manifest");
  const auto manifest = aslib::load_manifest(cfg.manifest);

  std::map<bool, std::unique_ptr<eval::FoldEmbedder>> embedders;
  std::vector<bool> available;
  for (bool shuffle : {true, false}) {
    const bool used = std::any_of(variants.begin(), variants.end(), [&](const Variant& v) { return v.shuffle == shuffle; });
    if (!used) continue;
    SerializationConfig ser = cfg.serialization;
    ser.shuffle = shuffle;
    auto texts = load_texts(scenario, manifest, ser, seeds, cfg.jobs);
    if (!texts.failures.empty()) {
      throw Error(ErrorKind::Io, "instance '" + scenario.instances[texts.failures.front().first] +
                                     "': " + texts.failures.front().second);
    }
    available = texts.available;
    embedders[shuffle] = make_embedder(cfg, std::move(texts));
  }

  eval::EvaluationContext ctx;
  ctx.scenario = &scenario;
  ctx.available = available;
  ctx.jobs = cfg.jobs;
  const double sbs = eval::overall_par10(eval::cross_validate(ctx, eval::SbsSpec{}));
  const double vbs = eval::overall_par10(eval::cross_validate(ctx, eval::OracleSpec{}));

  std::string out = "scenario,dimension,variant,shuffle,metric,weighting,k,seeds,par10,gap_closed\n";
  for (const auto& v : variants) {
    ctx.embedder = embedders.at(v.shuffle).get();
    const double par10 = eval::overall_par10(eval::cross_validate(ctx, eval::ZeroFolioSpec{v.selector, v.seeds, false}));
    std::string seeds_field;
    for (std::size_t i = 0; i < v.seeds.size(); ++i) seeds_field += (i ? ";" : "") + std::to_string(v.seeds[i]);
    out += scenario.name + "," + v.dimension + "," + v.name + "," + (v.shuffle ? "true" : "false") + "," +
           to_string(v.selector.metric) + "," + to_string(v.selector.weighting) + "," + std::to_string(v.selector.k) +
           "," + seeds_field + "," + text::format_double(par10) + "," +
           (sbs > vbs ? text::format_double(eval::gap_closed(sbs, par10, vbs)) : std::string()) + "\n";
  }
  write_output(cfg, out);
  return out;
}

namespace {

constexpr int kStateVersion = 1;

ordered_json backend_json(const BackendConfig& b) {
  ordered_json j;
  j["kind"] = b.kind == BackendKind::TfIdf ? "tfidf" : "remote";
  if (b.kind == BackendKind::Remote) {
    j["model_id"] = b.model_id;
    j["endpoint_url"] = b.endpoint_url;
  } else {
    j["dimensions"] = b.dimensions;
    j["ngram_min"] = b.ngram_min;
    j["ngram_max"] = b.ngram_max;
  }
  return j;
}

}  // namespace

EmbedSummary cmd_embed(const RunConfig& cfg) {
  cfg.backend.validate();
  if (cfg.seeds.empty()) throw Error(ErrorKind::InvalidArgument, "embedding needs at least one seed");
  if (cfg.manifest.empty()) throw Error(ErrorKind::InvalidArgument, "embedding needs --manifest");
  const auto scenario = aslib::load_scenario(cfg.scenario_dir);
  const auto manifest = aslib::load_manifest(cfg.manifest);
  auto texts = load_texts(scenario, manifest, cfg.serialization, cfg.seeds, cfg.jobs);

  EmbedSummary summary;
  for (const auto& [i, message] : texts.failures) {
    for (auto seed : cfg.seeds) summary.failures.push_back({scenario.instances[i], seed, message});
  }
  const std::size_t n = scenario.instances.size();
  std::map<std::uint64_t, std::vector<std::optional<CacheKey>>> keys;
  std::map<std::uint64_t, std::string> model_ids;
  std::map<std::uint64_t, std::vector<double>> idf;

  for (auto seed : cfg.seeds) {
    auto& seed_keys = keys[seed];
    seed_keys.assign(n, std::nullopt);
    const auto& seed_texts = texts.texts[seed];
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (texts.available[i]) members.push_back(i);
    }
    if (members.empty()) continue;

    if (cfg.backend.kind == BackendKind::TfIdf) {
      std::vector<std::string> corpus;
      for (auto i : members) corpus.push_back(seed_texts[i]);
      const auto model = TfIdfModel::fit(corpus, cfg.backend);
      const auto model_id = tfidf_model_id(cfg.backend, corpus);
      model_ids[seed] = model_id;
      idf[seed] = model.idf();
      for (auto i : members) {
        auto key = CacheKey::for_text(seed_texts[i], model_id);
        try {
          bool hit = false;
          try {
            hit = cache_get(key, cfg.cache_dir).has_value();
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::CacheCorrupt) throw;
          }
          if (hit) {
            ++summary.cached;
          } else {
            cache_put(key, model.embed(seed_texts[i]), cfg.cache_dir);
            ++summary.embedded;
          }
          seed_keys[i] = std::move(key);
        } catch (const Error& e) {
          summary.failures.push_back({scenario.instances[i], seed, e.what()});
        }
      }
      continue;
    }

    model_ids[seed] = cfg.backend.model_id;
    std::vector<std::size_t> pending;
    for (auto i : members) {
      auto key = CacheKey::for_text(seed_texts[i], cfg.backend.model_id);
      try {
        if (cache_get(key, cfg.cache_dir)) {
          ++summary.cached;
          seed_keys[i] = std::move(key);
          continue;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::CacheCorrupt) throw;  // corrupt entries are re-fetched
      }
      if (seed_texts[i].empty()) {
        summary.failures.push_back({scenario.instances[i], seed, "serialized text is empty"});
        continue;
      }
      pending.push_back(i);
    }
    const RemoteEmbedder embedder(cfg.backend);
    const std::size_t batch = cfg.backend.batch_size;
    for (std::size_t start = 0; start < pending.size(); start += batch) {
      const std::size_t end = std::min(pending.size(), start + batch);
      std::vector<std::string> batch_texts;
      for (std::size_t p = start; p < end; ++p) batch_texts.push_back(seed_texts[pending[p]]);
      try {
        const auto vectors = embedder.embed(batch_texts);
        for (std::size_t p = start; p < end; ++p) {
          auto key = CacheKey::for_text(seed_texts[pending[p]], cfg.backend.model_id);
          cache_put(key, vectors[p - start], cfg.cache_dir);
          seed_keys[pending[p]] = std::move(key);
          ++summary.embedded;
        }
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::AuthError) throw;
        for (std::size_t p = start; p < end; ++p) summary.failures.push_back({scenario.instances[pending[p]], seed, e.what()});
      }
    }
  }
  summary.failed = summary.failures.size();

  if (!cfg.state.empty()) {
    ordered_json state;
    state["schema_version"] = kStateVersion;
    state["scenario"] = scenario.name;
    state["algorithms"] = scenario.algorithms;
    state["cutoff_seconds"] = scenario.cutoff_seconds;
    state["backend"] = backend_json(cfg.backend);
    state["serialization"] = {{"budget_chars", cfg.serialization.budget_chars},
                              {"shuffle", cfg.serialization.shuffle}};
    state["seeds"] = cfg.seeds;
    ordered_json ids = ordered_json::object();
    for (auto seed : cfg.seeds) ids[std::to_string(seed)] = model_ids[seed];
    state["model_ids"] = std::move(ids);
    if (cfg.backend.kind == BackendKind::TfIdf) {
      ordered_json weights = ordered_json::object();
      for (auto seed : cfg.seeds) weights[std::to_string(seed)] = idf[seed];
      state["tfidf_idf"] = std::move(weights);
    }
    auto instances = ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
      ordered_json refs = ordered_json::object();
      bool complete = true;
      for (auto seed : cfg.seeds) {
        const auto& key = keys[seed][i];
        if (!key) {
          complete = false;
          break;
        }
        refs[std::to_string(seed)] = to_hex(key->content_hash);
      }
      if (!complete) continue;
      instances.push_back({{"id", scenario.instances[i]}, {"keys", std::move(refs)}, {"par10", scenario.par10_row(i)}});
    }
    state["instances"] = std::move(instances);
    if (cfg.state.has_parent_path()) fs::create_directories(cfg.state.parent_path());
    text::write_file_atomic(cfg.state, state.dump(1) + "\n");
  }
  return summary;
}

namespace {

Sha256Digest digest_from_hex(const std::string& hex) {
  Sha256Digest d{};
  if (hex.size() != 64) throw Error(ErrorKind::InvalidArgument, "bad cache reference '" + hex + "'");
  for (std::size_t i = 0; i < 32; ++i) d[i] = static_cast<std::uint8_t>(std::stoul(hex.substr(2 * i, 2), nullptr, 16));
  return d;
}

}  // namespace

SelectOutcome cmd_select(const RunConfig& cfg, const std::vector<fs::path>& instance_files) {
  if (cfg.state.empty()) throw Error(ErrorKind::InvalidArgument, "select needs --state");
  if (!fs::exists(cfg.state)) throw Error(ErrorKind::MissingFile, cfg.state.string());
  if (instance_files.empty()) throw Error(ErrorKind::InvalidArgument, "select needs at least one instance file");
  ordered_json state;
  try {
    state = ordered_json::parse(text::read_file(cfg.state));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed selector state: ") + e.what());
  }
  try {
    if (state.at("schema_version").get<int>() != kStateVersion) {
      throw Error(ErrorKind::InvalidArgument, "unsupported selector state version");
    }
    SelectOutcome outcome;
    outcome.algorithms = state.at("algorithms").get<std::vector<std::string>>();
    const auto seeds = state.at("seeds").get<std::vector<std::uint64_t>>();
    const auto& backend_j = state.at("backend");
    BackendConfig backend = cfg.backend;
    backend.kind = backend_j.at("kind").get<std::string>() == "tfidf" ? BackendKind::TfIdf : BackendKind::Remote;
    if (backend.kind == BackendKind::TfIdf) {
      backend.dimensions = backend_j.at("dimensions").get<std::size_t>();
      backend.ngram_min = backend_j.at("ngram_min").get<std::size_t>();
      backend.ngram_max = backend_j.at("ngram_max").get<std::size_t>();
    } else {
      backend.model_id = backend_j.at("model_id").get<std::string>();
      if (backend.endpoint_url.empty()) backend.endpoint_url = backend_j.at("endpoint_url").get<std::string>();
    }
    SerializationConfig ser;
    ser.budget_chars = state.at("serialization").at("budget_chars").get<std::size_t>();
    ser.shuffle = state.at("serialization").at("shuffle").get<bool>();

    std::vector<std::string> files;
    for (const auto& p : instance_files) files.push_back(text::read_file(p));

    const auto& instances = state.at("instances");
    if (instances.empty()) throw Error(ErrorKind::EmptyTrainingSet, "selector state holds no instances");
    std::vector<AlgorithmScores> per_seed;
    for (auto seed : seeds) {
      const std::string seed_key = std::to_string(seed);
      const std::string model_id = state.at("model_ids").at(seed_key).get<std::string>();
      std::vector<EmbeddingVector> train;
      std::vector<std::vector<double>> par10;
      for (const auto& inst : instances) {
        const CacheKey key{digest_from_hex(inst.at("keys").at(seed_key).get<std::string>()), model_id};
        auto v = cache_get(key, cfg.cache_dir);
        if (!v) {
          throw Error(ErrorKind::MissingFile, "cache entry for instance '" + inst.at("id").get<std::string>() +
                                                   "' (seed " + seed_key + ") is missing from " + cfg.cache_dir.string());
        }
        train.push_back(std::move(*v));
        par10.push_back(inst.at("par10").get<std::vector<double>>());
      }
      ser.seed = seed;
      const std::string serialized = serialize_instance(files, ser);
      EmbeddingVector query;
      if (backend.kind == BackendKind::TfIdf) {
        const TfIdfModel model(backend.dimensions, backend.ngram_min, backend.ngram_max,
                               state.at("tfidf_idf").at(seed_key).get<std::vector<double>>());
        query = model.embed(serialized);
      } else {
        const auto key = CacheKey::for_text(serialized, model_id);
        if (auto cached = cache_get(key, cfg.cache_dir)) {
          query = std::move(*cached);
        } else {
          query = RemoteEmbedder(backend).embed({serialized}).front();
          cache_put(key, query, cfg.cache_dir);
        }
      }
      const TrainedSelector selector(std::move(train), std::move(par10), cfg.selector);
      per_seed.push_back(selector.score_algorithms(query));
    }
    outcome.scores = vote_scores(per_seed);
    outcome.algorithm = select(outcome.scores);
    outcome.algorithm_name = outcome.algorithms.at(outcome.algorithm);
    return outcome;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed selector state: ") + e.what());
  }
}

std::string cmd_report(const std::vector<fs::path>& inputs, report::Format format) {
  if (inputs.empty()) throw Error(ErrorKind::InvalidArgument, "report needs at least one --input");
  std::vector<eval::EvaluationReport> reports;
  for (const auto& p : inputs) {
    if (!fs::exists(p)) throw Error(ErrorKind::MissingFile, p.string());
    reports.push_back(report::from_json(text::read_file(p)));
  }
  switch (format) {
    case report::Format::Markdown:
      return report::to_markdown(reports);
    case report::Format::Csv: {
      std::string out;
      for (std::size_t r = 0; r < reports.size(); ++r) {
        auto csv = report::to_csv(reports[r]);
        out += r == 0 ? csv : csv.substr(csv.find('\n') + 1);
      }
      return out;
    }
    case report::Format::Json: {
      if (reports.size() == 1) return report::to_json(reports.front());
      std::string out = "[\n";
      for (std::size_t r = 0; r < reports.size(); ++r) {
        auto js = report::to_json(reports[r]);
        js.pop_back();
        out += js + (r + 1 < reports.size() ? ",\n" : "\n");
      }
      return out + "]\n";
    }
  }
  return {};
}

}  // namespace zerofolio::cli
