#pragma once

#include <cstddef>
#include <span>

namespace zerofolio {

struct WilcoxonResult {
  double statistic = 0.0;  // min(W+, W-)
  double p_value = 1.0;    // two-sided
  std::size_t n = 0;       // pairs with a non-zero difference
  bool exact = true;
};

/// Paired two-sided Wilcoxon signed-rank test on d = x - y. Zero differences
/// are dropped and tied |d| get average ranks. For n <= 25 the p-value comes
/// from the exact sign-flip distribution of the (possibly tied) ranks;
/// above that from the normal approximation with tie and continuity
/// corrections. No non-zero differences gives p = 1.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

inline constexpr std::size_t kWilcoxonExactLimit = 25;

}  // namespace zerofolio
