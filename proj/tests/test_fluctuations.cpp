#include <gtest/gtest.h>

#include <algorithm>

#include "ergo/fluctuations.hpp"
#include "ergo/random.hpp"
#include "support.hpp"

using namespace ergo;

namespace {
std::size_t count(std::vector<double> x, double eps) { return fluc_count(std::span<const double>(x), eps).count; }
}  // namespace

TEST(FlucCount, Examples) {
  EXPECT_EQ(count({2, 2, 2, 2}, 0.1), 0u);
  const std::vector<double> alt{0, 1, 0, 1};
  const auto r = fluc_count(std::span<const double>(alt), 1.0);
  EXPECT_EQ(r.count, 3u);
  const std::vector<std::pair<std::size_t, std::size_t>> w{{0, 1}, {1, 2}, {2, 3}};
  EXPECT_EQ(r.witness, w);
  const std::vector<double> ramp{0, 0.5, 1};
  const auto r2 = fluc_count(std::span<const double>(ramp), 1.0);
  EXPECT_EQ(r2.count, 1u);
  EXPECT_EQ(r2.witness, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}}));
}

TEST(FlucCount, EdgeCases) {
  EXPECT_EQ(count({}, 1.0), 0u);
  EXPECT_EQ(count({5}, 1.0), 0u);
  EXPECT_THROW(count({0, 1}, 0.0), InvalidParameter);
  EXPECT_THROW(count({0, 1}, -1.0), InvalidParameter);
  EXPECT_THROW(count({0, std::nan("")}, 1.0), InvalidParameter);
  // boundary |x_i - x_j| = eps counts
  EXPECT_EQ(count({0, 0.25}, 0.25), 1u);
}

TEST(FlucCount, RationalMode) {
  const std::vector<Rational> x{0, 1, 0, 1};
  EXPECT_EQ(fluc_count(std::span<const Rational>(x), Rational(1)).count, 3u);
  const std::vector<Rational> y{0, make_rational(1, 3)};
  EXPECT_EQ(fluc_count(std::span<const Rational>(y), make_rational(1, 3)).count, 1u);
  EXPECT_EQ(fluc_count(std::span<const Rational>(y), Rational(make_rational(1, 3) + make_rational(1, 1000000))).count, 0u);
}

TEST(FlucOracle, Examples) {
  const std::vector<double> alt{0, 1, 0, 1}, two{0, 1}, mono{0, .1, .2, .3, .4, .5, .6, .7, .8, .9, 1.0};
  EXPECT_EQ(fluc_count_oracle(std::span<const double>(alt), 1.0), 3u);
  EXPECT_EQ(fluc_count_oracle(std::span<const double>(two), 1.5), 0u);
  EXPECT_EQ(fluc_count_oracle(std::span<const double>(mono), 1.0), 1u);
  EXPECT_EQ(count(mono, 1.0), 1u);
  const std::vector<double> long_seq(21, 0.0);
  EXPECT_THROW(fluc_count_oracle(std::span<const double>(long_seq), 1.0), BudgetError);
}

TEST(MetastableWindow, Examples) {
  const std::vector<double> a{0, 1, 0}, b{0, 0.2, 0.4};
  EXPECT_TRUE(metastable_window_ok(std::span<const double>(a), 1, 0, 0.5));
  EXPECT_FALSE(metastable_window_ok(std::span<const double>(a), 0, 2, 0.5));
  EXPECT_TRUE(metastable_window_ok(std::span<const double>(b), 0, 2, 0.5));
  EXPECT_TRUE(metastable_window_ok(std::span<const double>(a), 0, 1, 1.0));  // spread == eps is close
  EXPECT_THROW(metastable_window_ok(std::span<const double>(a), 1, 2, 0.5), RangeError);
}

class FlucProperties : public ::testing::TestWithParam<int> {};

TEST_P(FlucProperties, GreedyMatchesOracleAndMonotone) {
  Stream rng(77, {static_cast<std::uint64_t>(GetParam())});
  const std::size_t n = rng.below(13);
  std::vector<double> x(n);
  // coarse values make exact-threshold ties common
  for (auto& v : x) v = static_cast<double>(rng.below(9)) / 8.0 - 0.5;
  const std::span<const double> xs(x);
  std::size_t prev = std::numeric_limits<std::size_t>::max();
  for (double eps : {0.125, 0.25, 0.3, 0.5, 1.0}) {
    const auto r = fluc_count(xs, eps);
    ASSERT_EQ(r.count, fluc_count_oracle(xs, eps)) << "eps " << eps;
    ASSERT_EQ(r.witness.size(), r.count);
    for (std::size_t l = 0; l < r.witness.size(); ++l) {
      const auto [i, j] = r.witness[l];
      ASSERT_LT(i, j);
      ASSERT_GE(std::abs(x[i] - x[j]), eps - kAbsTol);
      if (l > 0) ASSERT_LE(r.witness[l - 1].second, i);
    }
    EXPECT_LE(r.count, prev);
    prev = r.count;
    const double spread = n == 0 ? 0.0 : *std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end());
    EXPECT_EQ(r.count == 0, spread < eps - kAbsTol);
  }
  FlucScanner<double> scan(0.25);
  for (std::size_t m = 0; m < n; ++m) {
    const auto before = scan.count();
    scan.push(x[m]);
    EXPECT_GE(scan.count(), before);
    EXPECT_EQ(scan.count(), fluc_count_only(xs.first(m + 1), 0.25));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, FlucProperties, ::testing::Range(0, 200));
