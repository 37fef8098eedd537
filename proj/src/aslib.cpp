#include "zerofolio/aslib.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "zerofolio/arff.hpp"
#include "zerofolio/error.hpp"
#include "zerofolio/text.hpp"

namespace zerofolio::aslib {

namespace fs = std::filesystem;

double par10(const RunRecord& run, double cutoff_seconds) {
  return run.solved ? run.runtime_seconds : 10.0 * cutoff_seconds;
}

namespace {

[[noreturn]] void inconsistent(const std::string& reason) {
  throw Error(ErrorKind::InconsistentScenario, reason);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_placeholder(std::string_view v) {
  v = trim(v);
  return v.empty() || v == "?" || v == "~" || v == "null" || v == "[]";
}

// A flow list "[a, b]" or comma list "a, b".
std::vector<std::string> scalar_list(std::string_view v) {
  v = trim(v);
  if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<std::string> out;
  for (auto& part : text::split(v, ',')) {
    auto item = unquote(part);
    if (!is_placeholder(item)) out.push_back(item);
  }
  return out;
}

std::string cell_string(const arff::Value& v) {
  if (auto s = std::get_if<std::string>(&v)) return *s;
  if (auto d = std::get_if<double>(&v)) {
    if (std::floor(*d) == *d && std::fabs(*d) < 1e15) return std::to_string(static_cast<long long>(*d));
    return text::format_double(*d);
  }
  return "?";
}

std::optional<double> cell_number(const arff::Value& v) {
  if (auto d = std::get_if<double>(&v)) return *d;
  if (auto s = std::get_if<std::string>(&v)) {
    try {
      std::size_t used = 0;
      double d = std::stod(*s, &used);
      if (used == s->size()) return d;
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

std::size_t require_column(const arff::Relation& rel, std::string_view name, const std::string& file) {
  auto idx = rel.find_attribute(name);
  if (idx == static_cast<std::size_t>(-1)) {
    inconsistent(file + " lacks column '" + std::string(name) + "'");
  }
  return idx;
}

// Rows with a repetition other than 1 are skipped; a missing column means 1.
bool first_repetition(const std::vector<arff::Value>& row, std::size_t rep_col) {
  if (rep_col == static_cast<std::size_t>(-1)) return true;
  auto rep = cell_number(row[rep_col]);
  return !rep || *rep == 1.0;
}

arff::Relation read_arff(const fs::path& dir, const std::string& name) {
  const auto path = dir / name;
  if (!fs::exists(path)) throw Error(ErrorKind::MissingFile, name);
  return arff::parse(text::read_file(path));
}

}  // namespace

std::vector<double> Scenario::par10_row(std::size_t instance) const {
  std::vector<double> row(algorithms.size());
  for (std::size_t a = 0; a < algorithms.size(); ++a) row[a] = par10(instance, a);
  return row;
}

void Scenario::finalize() {
  if (!(cutoff_seconds > 0.0) || !std::isfinite(cutoff_seconds)) inconsistent("cutoff must be positive");
  if (algorithms.size() < 2) inconsistent("a scenario needs at least two algorithms");
  std::set<std::string> seen(algorithms.begin(), algorithms.end());
  if (seen.size() != algorithms.size()) inconsistent("duplicate algorithm names");
  if (runs.size() != instances.size()) inconsistent("run matrix rows do not match instances");
  if (folds.size() != instances.size()) inconsistent("fold assignment does not cover every instance");
  if (!feature_names.empty() && features.size() != instances.size()) {
    inconsistent("feature matrix rows do not match instances");
  }
  index_.clear();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (!index_.emplace(instances[i], i).second) inconsistent("duplicate instance '" + instances[i] + "'");
    if (runs[i].size() != algorithms.size()) {
      inconsistent("instance '" + instances[i] + "' lacks runs for some algorithms");
    }
    for (const auto& run : runs[i]) {
      if (!(run.runtime_seconds >= 0.0) || !std::isfinite(run.runtime_seconds)) {
        inconsistent("instance '" + instances[i] + "' has a negative or non-finite runtime");
      }
      if (run.solved && run.runtime_seconds > cutoff_seconds) {
        inconsistent("instance '" + instances[i] + "' has a solved run above the cutoff");
      }
    }
    if (folds[i] < 1) inconsistent("instance '" + instances[i] + "' has fold < 1");
    if (!feature_names.empty() && features[i].size() != feature_names.size()) {
      inconsistent("instance '" + instances[i] + "' has the wrong feature count");
    }
  }
}

std::size_t Scenario::index_of(std::string_view instance_id) const {
  auto it = index_.find(std::string(instance_id));
  if (it == index_.end()) throw Error(ErrorKind::UnknownInstance, std::string(instance_id));
  return it->second;
}

bool Scenario::contains(std::string_view instance_id) const {
  return index_.count(std::string(instance_id)) != 0;
}

int Scenario::fold_count() const {
  return folds.empty() ? 0 : *std::max_element(folds.begin(), folds.end());
}

bool Scenario::operator==(const Scenario& o) const {
  return name == o.name && algorithms == o.algorithms && cutoff_seconds == o.cutoff_seconds &&
         instances == o.instances && runs == o.runs && feature_names == o.feature_names &&
         features == o.features && folds == o.folds && metadata == o.metadata;
}

Description parse_description(std::string_view text) {
  // Tolerant reader for the YAML subset ASlib uses: top-level "key: value",
  // indented "- item" lists, and one level of nested "name:" maps.
  struct Entry {
    std::string scalar;
    std::vector<std::string> items;
    std::vector<std::string> children;
    std::size_t child_indent = 0;
  };
  std::map<std::string, Entry> entries;
  std::string current;
  for (std::string_view raw : text::split_lines(text)) {
    auto comment = raw.find('#');
    std::string_view line = comment == std::string_view::npos ? raw : raw.substr(0, comment);
    if (trim(line).empty()) continue;
    const bool indented = std::isspace(static_cast<unsigned char>(line.front()));
    std::string_view body = trim(line);
    if (!indented && body.front() != '-') {
      auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      current = lower(trim(body.substr(0, colon)));
      entries[current].scalar = std::string(trim(body.substr(colon + 1)));
      continue;
    }
    if (current.empty()) continue;
    if (body.front() == '-') {
      auto item = unquote(body.substr(1));
      if (!is_placeholder(item)) entries[current].items.push_back(item);
      continue;
    }
    // Nested "name:" keys; deeper levels (per-algorithm properties) are skipped.
    const std::size_t indent = line.find_first_not_of(" \t");
    auto colon = body.find(':');
    if (colon == std::string_view::npos) continue;
    auto& entry = entries[current];
    if (entry.children.empty()) entry.child_indent = indent;
    if (indent == entry.child_indent) entry.children.push_back(unquote(body.substr(0, colon)));
  }

  Description d;
  if (auto it = entries.find("scenario_id"); it != entries.end()) d.scenario_id = unquote(it->second.scalar);
  auto cutoff = entries.find("algorithm_cutoff_time");
  if (cutoff == entries.end() || is_placeholder(cutoff->second.scalar)) {
    inconsistent("description lacks algorithm_cutoff_time");
  }
  try {
    d.cutoff_seconds = std::stod(unquote(cutoff->second.scalar));
  } catch (const std::exception&) {
    inconsistent("unparseable algorithm_cutoff_time '" + cutoff->second.scalar + "'");
  }
  if (auto it = entries.find("performance_measures"); it != entries.end()) {
    auto list = it->second.items.empty() ? scalar_list(it->second.scalar) : it->second.items;
    if (!list.empty()) d.performance_measure = list.front();
  }
  if (auto it = entries.find("metainfo_algorithms"); it != entries.end() && !it->second.children.empty()) {
    d.algorithms = it->second.children;
  } else {
    for (const char* key : {"algorithms_deterministic", "algorithms_stochastic"}) {
      auto e = entries.find(key);
      if (e == entries.end()) continue;
      auto list = e->second.items.empty() ? scalar_list(e->second.scalar) : e->second.items;
      d.algorithms.insert(d.algorithms.end(), list.begin(), list.end());
    }
  }
  if (d.algorithms.empty()) inconsistent("description lists no algorithms");
  return d;
}

Scenario load_scenario(const fs::path& dir) {
  const auto desc_path = dir / "description.txt";
  if (!fs::exists(desc_path)) throw Error(ErrorKind::MissingFile, "description.txt");
  for (const char* required : {"algorithm_runs.arff", "cv.arff"}) {
    if (!fs::exists(dir / required)) throw Error(ErrorKind::MissingFile, required);
  }
  const Description desc = parse_description(text::read_file(desc_path));

  Scenario sc;
  sc.name = desc.scenario_id.empty() ? dir.filename().string() : desc.scenario_id;
  sc.algorithms = desc.algorithms;
  sc.cutoff_seconds = desc.cutoff_seconds;

  std::unordered_map<std::string, std::size_t> algo_index;
  for (std::size_t a = 0; a < sc.algorithms.size(); ++a) algo_index.emplace(sc.algorithms[a], a);

  // Runs.
  const auto runs = read_arff(dir, "algorithm_runs.arff");
  const auto id_col = require_column(runs, "instance_id", "algorithm_runs.arff");
  const auto algo_col = require_column(runs, "algorithm", "algorithm_runs.arff");
  const auto status_col = require_column(runs, "runstatus", "algorithm_runs.arff");
  const auto rep_col = runs.find_attribute("repetition");
  auto time_col = desc.performance_measure.empty() ? static_cast<std::size_t>(-1)
                                                   : runs.find_attribute(desc.performance_measure);
  if (time_col == static_cast<std::size_t>(-1)) time_col = require_column(runs, "runtime", "algorithm_runs.arff");

  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<std::optional<RunRecord>>> table;
  for (const auto& row : runs.rows) {
    const std::string id = cell_string(row[id_col]);
    const std::string algo = cell_string(row[algo_col]);
    auto a = algo_index.find(algo);
    if (a == algo_index.end()) inconsistent("algorithm '" + algo + "' is not listed in description.txt");
    if (!first_repetition(row, rep_col)) {
      ++sc.metadata.ignored_repetitions;
      continue;
    }
    auto [it, inserted] = table.try_emplace(id, sc.algorithms.size());
    if (inserted) order.push_back(id);
    auto& slot = it->second[a->second];
    if (slot) {
      ++sc.metadata.ignored_repetitions;
      continue;
    }
    RunRecord rec;
    rec.solved = lower(cell_string(row[status_col])) == "ok";
    auto runtime = cell_number(row[time_col]);
    if (!runtime) {
      if (rec.solved) inconsistent("solved run of '" + algo + "' on '" + id + "' has no runtime");
      runtime = sc.cutoff_seconds;
    }
    if (!(*runtime >= 0.0) || !std::isfinite(*runtime)) {
      inconsistent("run of '" + algo + "' on '" + id + "' has an invalid runtime");
    }
    rec.runtime_seconds = *runtime;
    if (rec.solved && rec.runtime_seconds > sc.cutoff_seconds) {
      rec.runtime_seconds = sc.cutoff_seconds;
      ++sc.metadata.clamped_runs;
    }
    slot = rec;
  }

  // Folds.
  const auto cv = read_arff(dir, "cv.arff");
  const auto cv_id = require_column(cv, "instance_id", "cv.arff");
  const auto cv_fold = require_column(cv, "fold", "cv.arff");
  const auto cv_rep = cv.find_attribute("repetition");
  std::unordered_map<std::string, int> fold_of;
  for (const auto& row : cv.rows) {
    if (!first_repetition(row, cv_rep)) continue;
    auto fold = cell_number(row[cv_fold]);
    if (!fold || *fold < 1 || std::floor(*fold) != *fold) inconsistent("cv.arff has an invalid fold value");
    fold_of.try_emplace(cell_string(row[cv_id]), static_cast<int>(*fold));
  }

  for (const auto& id : order) {
    auto f = fold_of.find(id);
    if (f == fold_of.end()) {
      ++sc.metadata.dropped_without_fold;
      continue;
    }
    auto& row = table[id];
    std::vector<RunRecord> records;
    records.reserve(row.size());
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (!row[a]) inconsistent("no run of '" + sc.algorithms[a] + "' on instance '" + id + "'");
      records.push_back(*row[a]);
    }
    sc.instances.push_back(id);
    sc.runs.push_back(std::move(records));
    sc.folds.push_back(f->second);
  }

  // Features (optional).
  if (fs::exists(dir / "feature_values.arff")) {
    const auto feats = read_arff(dir, "feature_values.arff");
    const auto f_id = require_column(feats, "instance_id", "feature_values.arff");
    const auto f_rep = feats.find_attribute("repetition");
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < feats.attributes.size(); ++c) {
      if (c == f_id || c == f_rep) continue;
      if (feats.attributes[c].type != arff::AttributeType::Numeric) continue;
      cols.push_back(c);
      sc.feature_names.push_back(feats.attributes[c].name);
    }
    std::unordered_map<std::string, std::vector<std::optional<double>>> by_id;
    for (const auto& row : feats.rows) {
      if (!first_repetition(row, f_rep)) continue;
      std::vector<std::optional<double>> values;
      values.reserve(cols.size());
      for (auto c : cols) {
        auto v = cell_number(row[c]);
        values.push_back(v && std::isfinite(*v) ? v : std::nullopt);
      }
      by_id.try_emplace(cell_string(row[f_id]), std::move(values));
    }
    sc.features.reserve(sc.instances.size());
    for (const auto& id : sc.instances) {
      auto it = by_id.find(id);
      sc.features.push_back(it != by_id.end() ? it->second
                                              : std::vector<std::optional<double>>(cols.size()));
    }
  }

  sc.finalize();
  return sc;
}

InstanceManifest parse_manifest(std::string_view text, const fs::path& base_dir) {
  InstanceManifest m;
  std::size_t line_no = 0;
  for (std::string_view line : text::split_lines(text)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto fields = text::split(line, '\t');
    const std::string id(trim(fields.front()));
    std::vector<fs::path> paths;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto p = trim(fields[i]);
      if (p.empty()) continue;
      fs::path path(p);
      paths.push_back(path.is_absolute() ? path : base_dir / path);
    }
    if (id.empty() || paths.empty()) {
      throw Error(ErrorKind::MalformedManifest,
                  "line " + std::to_string(line_no) + ": expected '<instance_id>\\t<path>...'");
    }
    if (!m.entries.emplace(id, std::move(paths)).second) {
      throw Error(ErrorKind::MalformedManifest, "line " + std::to_string(line_no) + ": duplicate instance '" + id + "'");
    }
  }
  return m;
}

InstanceManifest load_manifest(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorKind::MissingFile, path.string());
  return parse_manifest(text::read_file(path), path.parent_path());
}

}  // namespace zerofolio::aslib
