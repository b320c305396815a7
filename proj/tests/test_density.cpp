#include <gtest/gtest.h>

#include "ergo/density.hpp"
#include "support.hpp"

using namespace ergo;

namespace {
const BlockSet kA = BlockSet::geometric(4, 2);
}

TEST(BlockSetTest, Validation) {
  EXPECT_THROW(BlockSet::geometric(1, 1), InvalidParameter);
  EXPECT_THROW(BlockSet::geometric(4, 1), InvalidParameter);
  EXPECT_THROW(BlockSet::geometric(4, 5), InvalidParameter);
  for (std::size_t k = 0; k + 1 < kA.block_count(); ++k) {
    EXPECT_LT(kA.block_start(k), kA.block_end(k));
    EXPECT_LE(kA.block_end(k), kA.block_start(k + 1));
  }
  EXPECT_GE(kA.block_start(0), 1u);
}

TEST(PrefixCount, Examples) {
  EXPECT_EQ(kA.prefix_count(0), 0u);
  EXPECT_EQ(kA.prefix_count(-5), 0u);
  EXPECT_EQ(kA.prefix_count(8), 5u);
  EXPECT_EQ(kA.prefix_count(15), 5u);
  EXPECT_EQ(kA.prefix_count(16), 6u);
  EXPECT_EQ(BlockSet::empty().prefix_count(100), 0u);
  std::uint64_t brute = 0;
  for (std::int64_t m = 1; m <= 5000; ++m) {
    const bool in = (m >= 1 && m < 2) || (m >= 4 && m < 8) || (m >= 16 && m < 32) || (m >= 64 && m < 128) ||
                    (m >= 256 && m < 512) || (m >= 1024 && m < 2048) || (m >= 4096 && m < 8192);
    brute += in;
    ASSERT_EQ(kA.contains(m), in) << m;
    ASSERT_EQ(kA.prefix_count(m), brute) << m;
  }
}

TEST(DensityPrefix, Examples) {
  EXPECT_EQ(density_prefix(kA, 7).value, make_rational(1, 3));
  EXPECT_EQ(density_prefix(kA, 7).count, 5u);
  EXPECT_EQ(density_prefix(kA, 7).denominator, 15u);
  EXPECT_EQ(density_prefix(kA, 15).value, make_rational(5, 31));
  EXPECT_EQ(density_prefix(BlockSet::geometric(10, 2), 3).value, make_rational(1, 7));
  EXPECT_EQ(density_prefix(BlockSet::empty(), 9).value, 0);
  EXPECT_THROW(density_prefix(kA, 0), RangeError);
}

TEST(DensityOscillationTest, Examples) {
  const auto osc = density_oscillation(kA, 12);
  for (const auto& u : osc.upper) EXPECT_EQ(u, make_rational(1, 3));
  EXPECT_EQ(osc.lower[0], make_rational(1, 7));
  EXPECT_EQ(osc.lower[1], make_rational(5, 31));
  EXPECT_GT(osc.gap, make_rational(1, 7));
  for (std::size_t m = 0; m <= 12; ++m) {
    // |A ∩ [1; 2*4^m - 1]| = (4^(m+1) - 1) / 3
    const std::uint64_t p = 1ULL << (2 * (m + 1));
    EXPECT_EQ(kA.prefix_count(static_cast<std::int64_t>(2 * (p / 4) - 1)), (p - 1) / 3);
  }
  EXPECT_EQ(density_oscillation(BlockSet::geometric(3, 3), 5).gap, 0);
  EXPECT_THROW(density_oscillation(kA, 0), InvalidParameter);
  EXPECT_THROW(density_oscillation(BlockSet::empty(), 3), InvalidParameter);
}

TEST(ShiftAverage, Examples) {
  EXPECT_EQ(shift_average(kA, 0, 8), make_rational(5, 8));
  EXPECT_EQ(shift_average(BlockSet::empty(), 3, 8), 0);
  EXPECT_EQ(shift_average(kA, -8, 8), 0);
  EXPECT_EQ(shift_average(kA, -3, 8), make_rational(3, 8));  // window [-2; 5] holds 1, 4, 5
  EXPECT_THROW(shift_average(kA, 0, 0), RangeError);
  for (std::int64_t w = -20; w <= 20; ++w)
    for (std::int64_t n = 1; n <= 60; ++n) {
      const auto x = shift_average(kA, w, n);
      ASSERT_GE(x, 0);
      ASSERT_LE(x, 1);
    }
}

TEST(ApproxIdentityTest, Examples) {
  const auto r = approx_identity_check(kA, 0, 8);
  EXPECT_EQ(r.lhs, make_rational(5, 136));
  EXPECT_EQ(r.rhs, make_rational(1, 8));
  EXPECT_TRUE(r.ok);
  const auto neg = approx_identity_check(kA, -1, 9);
  EXPECT_TRUE(neg.exact_form_holds);
  EXPECT_EQ(shift_average(kA, -1, 9), (2 + make_rational(-1, 9)) * density_prefix(kA, 8).value);
  EXPECT_EQ(approx_identity_check(BlockSet::empty(), 4, 3).lhs, 0);
  EXPECT_TRUE(approx_identity_check(BlockSet::empty(), 4, 3).ok);
  EXPECT_THROW(approx_identity_check(kA, -5, 5), RangeError);
  EXPECT_THROW(approx_identity_check(kA, 0, 0), RangeError);
}

TEST(ApproxIdentityTest, HoldsOnGrid) {
  for (std::int64_t w = -20; w <= 20; ++w)
    for (std::int64_t n = std::max<std::int64_t>(1, 1 - w); n <= 300; ++n) ASSERT_TRUE(approx_identity_check(kA, w, n).ok) << w << "," << n;
}

TEST(NonconvergenceWitnessTest, Examples) {
  const auto found = nonconvergence_witness(kA, 0.1, 0, 16, 4096);
  ASSERT_TRUE(found.has_value());
  EXPECT_LT(found->i, found->j);
  EXPECT_GE(found->i, 16);
  EXPECT_EQ(found->delta, abs(Rational(shift_average(kA, 0, found->i) - shift_average(kA, 0, found->j))));
  EXPECT_GT(found->delta, make_rational(1, 10));
  // smallest j first: no earlier j has a partner
  for (std::int64_t j = 17; j < found->j; ++j)
    for (std::int64_t i = 16; i < j; ++i)
      ASSERT_LE(abs(Rational(shift_average(kA, 0, i) - shift_average(kA, 0, j))), make_rational(1, 10));
  EXPECT_FALSE(nonconvergence_witness(kA, 3.0, 0, 16, 4096).has_value());
  EXPECT_FALSE(nonconvergence_witness(BlockSet::geometric(2, 2), 0.05, 0, 200, 2000).has_value());
  EXPECT_FALSE(nonconvergence_witness(kA, 0.1, 0, 16, 0).has_value());
  EXPECT_THROW(nonconvergence_witness(kA, 0.0, 0, 16, 10), InvalidParameter);
}
