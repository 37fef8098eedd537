#include "zerofolio/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zerofolio/error.hpp"

namespace zerofolio {

std::size_t single_best(const aslib::Scenario& scenario, std::span<const std::size_t> train_instances) {
  if (train_instances.empty()) throw Error(ErrorKind::EmptyTrainingSet, "single best needs training instances");
  // Comparing sums is equivalent to comparing means over a common count.
  std::vector<double> totals(scenario.algorithms.size(), 0.0);
  for (auto i : train_instances) {
    for (std::size_t a = 0; a < totals.size(); ++a) totals[a] += scenario.par10(i, a);
  }
  return static_cast<std::size_t>(std::min_element(totals.begin(), totals.end()) - totals.begin());
}

double virtual_best_par10(const aslib::Scenario& scenario, std::size_t instance) {
  if (instance >= scenario.instances.size()) {
    throw Error(ErrorKind::UnknownInstance, "instance index " + std::to_string(instance));
  }
  double best = scenario.par10(instance, 0);
  for (std::size_t a = 1; a < scenario.algorithms.size(); ++a) best = std::min(best, scenario.par10(instance, a));
  return best;
}

double virtual_best_par10(const aslib::Scenario& scenario, std::string_view instance_id) {
  return virtual_best_par10(scenario, scenario.index_of(instance_id));
}

std::size_t best_algorithm(std::span<const double> par10_row) {
  if (par10_row.empty()) throw Error(ErrorKind::InvalidArgument, "empty PAR10 row");
  return static_cast<std::size_t>(std::min_element(par10_row.begin(), par10_row.end()) - par10_row.begin());
}

FeaturePreprocessor fit_preprocessor(std::span<const FeatureRow> rows) {
  FeaturePreprocessor pre;
  if (rows.empty()) return pre;
  const std::size_t cols = rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != cols) throw Error(ErrorKind::ColumnMismatch, "training rows differ in width");
  }
  pre.medians.assign(cols, 0.0);
  pre.means.assign(cols, 0.0);
  pre.stds.assign(cols, 0.0);
  pre.all_missing.assign(cols, false);
  std::vector<double> observed;
  for (std::size_t c = 0; c < cols; ++c) {
    observed.clear();
    for (const auto& row : rows) {
      if (row[c]) observed.push_back(*row[c]);
    }
    if (observed.empty()) {
      pre.all_missing[c] = true;
      continue;
    }
    std::sort(observed.begin(), observed.end());
    const std::size_t m = observed.size();
    const double median = m % 2 == 1 ? observed[m / 2] : 0.5 * (observed[m / 2 - 1] + observed[m / 2]);
    pre.medians[c] = median;

    double sum = 0.0;
    for (const auto& row : rows) sum += row[c] ? *row[c] : median;
    const double mean = sum / static_cast<double>(rows.size());
    double sq = 0.0;
    for (const auto& row : rows) {
      const double d = (row[c] ? *row[c] : median) - mean;
      sq += d * d;
    }
    pre.means[c] = mean;
    pre.stds[c] = std::sqrt(sq / static_cast<double>(rows.size()));
  }
  return pre;
}

std::vector<double> apply_preprocessor(const FeaturePreprocessor& pre, const FeatureRow& row) {
  if (row.size() != pre.columns()) {
    throw Error(ErrorKind::ColumnMismatch,
                "row has " + std::to_string(row.size()) + " columns, expected " + std::to_string(pre.columns()));
  }
  std::vector<double> out(row.size(), 0.0);
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (pre.all_missing[c]) continue;
    const double x = row[c] ? *row[c] : pre.medians[c];
    const double sd = pre.stds[c] > 0.0 ? pre.stds[c] : 1.0;
    out[c] = (x - pre.means[c]) / sd;
  }
  return out;
}

}  // namespace zerofolio
