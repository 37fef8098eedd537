#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "zerofolio/aslib.hpp"

namespace zerofolio {

/// Algorithm with the lowest mean PAR10 over `train_instances` (indices into
/// the scenario); lowest index on ties.
std::size_t single_best(const aslib::Scenario& scenario, std::span<const std::size_t> train_instances);

/// min over algorithms of PAR10 on one instance.
double virtual_best_par10(const aslib::Scenario& scenario, std::size_t instance);
double virtual_best_par10(const aslib::Scenario& scenario, std::string_view instance_id);

/// argmin of a PAR10 row, lowest index on ties.
std::size_t best_algorithm(std::span<const double> par10_row);

using FeatureRow = std::vector<std::optional<double>>;

/// Median imputation followed by standard scaling, both fitted on training rows.
struct FeaturePreprocessor {
  std::vector<double> medians;
  std::vector<double> means;
  std::vector<double> stds;           // population standard deviation; 0 is scaled as 1
  std::vector<bool> all_missing;      // column had no observed training value

  std::size_t columns() const { return medians.size(); }
};

FeaturePreprocessor fit_preprocessor(std::span<const FeatureRow> rows);

/// Imputes and scales one row. Throws Error(ColumnMismatch).
std::vector<double> apply_preprocessor(const FeaturePreprocessor& pre, const FeatureRow& row);

}  // namespace zerofolio
