#include "zerofolio/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "zerofolio/error.hpp"

namespace zerofolio {

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::LengthMismatch,
                "paired samples of length " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  if (x.empty()) throw Error(ErrorKind::LengthMismatch, "paired samples must be non-empty");

  std::vector<double> diffs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d != 0.0) diffs.push_back(d);
  }
  WilcoxonResult result;
  result.n = diffs.size();
  if (diffs.empty()) return result;

  // Average ranks of |d|, kept doubled so ties stay integral.
  const std::size_t n = diffs.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::fabs(diffs[a]) < std::fabs(diffs[b]); });
  std::vector<long> rank2(n);
  double tie_term = 0.0;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && std::fabs(diffs[order[end]]) == std::fabs(diffs[order[start]])) ++end;
    const long doubled = static_cast<long>(start + 1 + end);  // 2 * mean of ranks start+1..end
    for (std::size_t k = start; k < end; ++k) rank2[order[k]] = doubled;
    const double t = static_cast<double>(end - start);
    tie_term += t * t * t - t;
    start = end;
  }

  long w_plus2 = 0, total2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total2 += rank2[i];
    if (diffs[i] > 0) w_plus2 += rank2[i];
  }
  const long w_min2 = std::min(w_plus2, total2 - w_plus2);
  result.statistic = static_cast<double>(w_min2) / 2.0;

  if (n <= kWilcoxonExactLimit) {
    // counts[s] = number of sign assignments whose doubled W+ equals s.
    std::vector<double> counts(static_cast<std::size_t>(total2) + 1, 0.0);
    counts[0] = 1.0;
    long reach = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (long s = reach; s >= 0; --s) {
        if (counts[static_cast<std::size_t>(s)] != 0.0) counts[static_cast<std::size_t>(s + rank2[i])] += counts[static_cast<std::size_t>(s)];
      }
      reach += rank2[i];
    }
    double tail = 0.0;
    for (long s = 0; s <= w_min2; ++s) tail += counts[static_cast<std::size_t>(s)];
    result.p_value = std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(n)));
    result.exact = true;
    return result;
  }

  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  result.exact = false;
  if (var <= 0.0) return result;
  const double w = static_cast<double>(w_min2) / 2.0;
  const double z = std::max(0.0, std::fabs(w - mean) - 0.5) / std::sqrt(var);
  result.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return result;
}

}  // namespace zerofolio
