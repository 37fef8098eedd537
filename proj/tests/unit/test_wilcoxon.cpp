#include <doctest.h>

#include "zerofolio/error.hpp"
#include "zerofolio/serialize.hpp"
#include "zerofolio/wilcoxon.hpp"

using namespace zerofolio;

TEST_CASE("exact small-sample reference") {
  const std::vector<double> x{125, 115, 130, 140, 140.5, 115.5, 140.25, 125.75};
  const std::vector<double> y{110, 122, 125, 120, 140, 124, 123, 137};
  const auto r = wilcoxon_signed_rank(x, y);
  CHECK(r.statistic == 12.0);
  CHECK(r.n == 8);
  CHECK(r.exact);
  CHECK(r.p_value == doctest::Approx(0.4609375).epsilon(1e-12));
}

TEST_CASE("all differences positive") {
  std::vector<double> x, y;
  for (int i = 1; i <= 10; ++i) {
    x.push_back(100.0 + i);
    y.push_back(50.0);
  }
  const auto r = wilcoxon_signed_rank(x, y);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == doctest::Approx(2.0 / 1024.0).epsilon(1e-12));
}

TEST_CASE("normal approximation reference with ties and a zero difference") {
  const std::vector<double> a{-1.2, -1.1, 0.7, -2.3, -0.1, -2.3, 1.1, 0.2, 1.4, -0.5, 0.4, -0.3, -0.7, 0.1, -1.3,
                              -0.4, 0.7,  0.1,  -0.4, 2.2, 0.1, -0.6, 0.2, -0.5, -0.4, -0.4, 2.0, 0.0, 0.2, 0.7};
  const std::vector<double> b{2.3, 0.1,  -0.3, 2.8, -1.2, -0.1, 1.0, 2.6, -0.6, -2.1, 1.0, -0.2, -0.1, 0.8, 0.5,
                              0.6, -0.1, 1.6,  1.8, 0.3,  -0.2, 1.0, 0.8, -0.7, -0.2, 1.3, 0.2,  -0.0, 0.5, 0.3};
  const auto r = wilcoxon_signed_rank(a, b);
  CHECK(r.n == 29);
  CHECK_FALSE(r.exact);
  CHECK(r.statistic == 145.5);
  CHECK(r.p_value == doctest::Approx(0.12204670454815092).epsilon(1e-9));
}

TEST_CASE("degenerate and invalid inputs") {
  const std::vector<double> x{1, 2, 3};
  CHECK(wilcoxon_signed_rank(x, x).p_value == 1.0);
  const std::vector<double> shorter{1, 2};
  CHECK_THROWS_AS(wilcoxon_signed_rank(x, shorter), Error);
  CHECK_THROWS_AS(wilcoxon_signed_rank(std::span<const double>{}, std::span<const double>{}), Error);
}

TEST_CASE("p-value is symmetric and in range") {
  SplitMix64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const auto n = 1 + rng.below(40);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng.below(20));
      y[i] = static_cast<double>(rng.below(20));
    }
    const auto r1 = wilcoxon_signed_rank(x, y);
    const auto r2 = wilcoxon_signed_rank(y, x);
    CHECK(r1.p_value == doctest::Approx(r2.p_value).epsilon(1e-12));
    CHECK(r1.statistic == r2.statistic);
    CHECK(r1.p_value > 0.0);
    CHECK(r1.p_value <= 1.0);
  }
}
