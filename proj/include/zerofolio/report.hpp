#pragma once

#include <span>
#include <string>
#include <string_view>

#include "zerofolio/eval.hpp"

namespace zerofolio::report {

enum class Format { Csv, Markdown, Json };

Format parse_format(std::string_view name);

/// CSV: `scenario,selector,fold,instances,par10_mean`, one row per fold plus
/// a fold = "all" row per selector, followed by the VBS rows.
std::string to_csv(const eval::EvaluationReport& report);

/// One table row per report, shaped like a results table: SBS, every
/// non-SBS selector, VBS, then Gap% per non-SBS selector.
std::string to_markdown(std::span<const eval::EvaluationReport> reports);

std::string to_json(const eval::EvaluationReport& report);
eval::EvaluationReport from_json(std::string_view text);

std::string emit_report(const eval::EvaluationReport& report, Format format);

/// Nearest integer, halves away from zero. Values within 5e-10 of a half
/// count as that half.
long round_half_away(double x);

}  // namespace zerofolio::report
