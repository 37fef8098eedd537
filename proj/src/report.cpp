#include "zerofolio/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "zerofolio/error.hpp"
#include "zerofolio/text.hpp"

namespace zerofolio::report {

using nlohmann::ordered_json;
using eval::EvaluationReport;

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "markdown" || name == "md") return Format::Markdown;
  if (name == "json") return Format::Json;
  throw Error(ErrorKind::InvalidArgument, "unknown report format '" + std::string(name) + "'");
}

long round_half_away(double x) {
  return std::lround(std::round(x * 1e9) / 1e9);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

void csv_rows(std::string& out, const std::string& scenario, const std::string& selector,
              const std::vector<eval::FoldSummary>& folds, double overall) {
  std::size_t total = 0;
  for (const auto& f : folds) {
    out += csv_field(scenario) + "," + csv_field(selector) + "," + std::to_string(f.fold) + "," +
           std::to_string(f.instances) + "," + text::format_double(f.par10_mean) + "\n";
    total += f.instances;
  }
  out += csv_field(scenario) + "," + csv_field(selector) + ",all," + std::to_string(total) + "," +
         text::format_double(overall) + "\n";
}

// Halves go away from zero at either precision.
std::string par10_cell(double v) {
  if (std::fabs(v) >= 100.0) return std::to_string(round_half_away(v));
  const long tenths = round_half_away(v * 10.0);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%ld.%ld", tenths < 0 ? "-" : "", std::labs(tenths) / 10, std::labs(tenths) % 10);
  return buf;
}

ordered_json folds_json(const std::vector<eval::FoldSummary>& folds) {
  auto arr = ordered_json::array();
  for (const auto& f : folds) arr.push_back({{"fold", f.fold}, {"instances", f.instances}, {"par10_mean", f.par10_mean}});
  return arr;
}

std::vector<eval::FoldSummary> folds_from(const ordered_json& arr) {
  std::vector<eval::FoldSummary> out;
  for (const auto& f : arr) {
    out.push_back({f.at("fold").get<int>(), f.at("instances").get<std::size_t>(), f.at("par10_mean").get<double>()});
  }
  return out;
}

}  // namespace

std::string to_csv(const EvaluationReport& report) {
  std::string out = "scenario,selector,fold,instances,par10_mean\n";
  for (const auto& s : report.selectors) csv_rows(out, report.scenario_name, s.name, s.folds, s.overall_par10);
  csv_rows(out, report.scenario_name, "vbs", report.vbs_folds, report.vbs_par10);
  return out;
}

std::string to_markdown(std::span<const EvaluationReport> reports) {
  std::vector<std::string> names;
  for (const auto& r : reports) {
    for (const auto& s : r.selectors) {
      if (s.name == "sbs") continue;
      if (std::find(names.begin(), names.end(), s.name) == names.end()) names.push_back(s.name);
    }
  }
  std::string out = "| Scenario | SBS |";
  for (const auto& n : names) out += " " + n + " |";
  out += " VBS |";
  for (const auto& n : names) out += " Gap% " + n + " |";
  out += "\n|---|---:|";
  for (std::size_t i = 0; i < 2 * names.size() + 1; ++i) out += "---:|";
  out += "\n";
  for (const auto& r : reports) {
    auto find = [&](const std::string& n) -> const eval::SelectorSummary* {
      for (const auto& s : r.selectors) {
        if (s.name == n) return &s;
      }
      return nullptr;
    };
    out += "| " + r.scenario_name + " | " + par10_cell(r.sbs_par10) + " |";
    for (const auto& n : names) {
      const auto* s = find(n);
      out += " " + (s ? par10_cell(s->overall_par10) : std::string("-")) + " |";
    }
    out += " " + par10_cell(r.vbs_par10) + " |";
    for (const auto& n : names) {
      const auto* s = find(n);
      out += " " + (s && s->gap_closed ? std::to_string(round_half_away(*s->gap_closed)) : std::string("-")) + " |";
    }
    out += "\n";
  }
  return out;
}

std::string to_json(const EvaluationReport& report) {
  ordered_json j;
  j["schema_version"] = EvaluationReport::kSchemaVersion;
  j["scenario"] = report.scenario_name;
  j["instance_counts"] = {{"total", report.instances_total}, {"embedded", report.instances_embedded}};
  j["sbs_par10"] = {{"embedded", report.sbs_par10}, {"full", report.sbs_par10_full}};
  j["vbs_par10"] = {{"embedded", report.vbs_par10}, {"full", report.vbs_par10_full}};
  auto selectors = ordered_json::array();
  for (const auto& s : report.selectors) {
    ordered_json item;
    item["name"] = s.name;
    item["overall_par10"] = s.overall_par10;
    item["gap_closed"] = s.gap_closed ? ordered_json(*s.gap_closed) : ordered_json(nullptr);
    item["folds"] = folds_json(s.folds);
    selectors.push_back(std::move(item));
  }
  j["selectors"] = std::move(selectors);
  j["vbs_folds"] = folds_json(report.vbs_folds);
  auto sig = ordered_json::array();
  for (const auto& p : report.significance) {
    sig.push_back({{"first", p.first},
                   {"second", p.second},
                   {"folds", p.folds},
                   {"statistic", p.statistic},
                   {"p_value", p.p_value}});
  }
  j["significance"] = std::move(sig);
  return j.dump(2) + "\n";
}

EvaluationReport from_json(std::string_view text) {
  try {
    const auto j = ordered_json::parse(text);
    const int version = j.at("schema_version").get<int>();
    if (version != EvaluationReport::kSchemaVersion) {
      throw Error(ErrorKind::InvalidArgument, "unsupported report schema_version " + std::to_string(version));
    }
    EvaluationReport r;
    r.scenario_name = j.at("scenario").get<std::string>();
    r.instances_total = j.at("instance_counts").at("total").get<std::size_t>();
    r.instances_embedded = j.at("instance_counts").at("embedded").get<std::size_t>();
    r.sbs_par10 = j.at("sbs_par10").at("embedded").get<double>();
    r.sbs_par10_full = j.at("sbs_par10").at("full").get<double>();
    r.vbs_par10 = j.at("vbs_par10").at("embedded").get<double>();
    r.vbs_par10_full = j.at("vbs_par10").at("full").get<double>();
    for (const auto& item : j.at("selectors")) {
      eval::SelectorSummary s;
      s.name = item.at("name").get<std::string>();
      s.overall_par10 = item.at("overall_par10").get<double>();
      if (!item.at("gap_closed").is_null()) s.gap_closed = item.at("gap_closed").get<double>();
      s.folds = folds_from(item.at("folds"));
      r.selectors.push_back(std::move(s));
    }
    r.vbs_folds = folds_from(j.at("vbs_folds"));
    for (const auto& p : j.at("significance")) {
      r.significance.push_back({p.at("first").get<std::string>(), p.at("second").get<std::string>(),
                                p.at("folds").get<std::size_t>(), p.at("statistic").get<double>(),
                                p.at("p_value").get<double>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed report JSON: ") + e.what());
  }
}

std::string emit_report(const EvaluationReport& report, Format format) {
  switch (format) {
    case Format::Csv: return to_csv(report);
    case Format::Markdown: return to_markdown(std::span<const EvaluationReport>(&report, 1));
    case Format::Json: return to_json(report);
  }
  return {};
}

}  // namespace zerofolio::report
