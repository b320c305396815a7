#include <gtest/gtest.h>

#include <cmath>

#include "ergo/random.hpp"
#include "ergo/transference.hpp"
#include "support.hpp"

using namespace ergo;
using testing_support::qs;

namespace {
PermutationSystem<Rational> three_cycle() {
  return PermutationSystem<Rational>(FiniteProbSpace::uniform(3), Automorphism::cycle(3),
                                     SimpleFunction<Rational>(qs({"1", "0", "0"})));
}
}  // namespace

TEST(Operator, NamesGridsAndShape) {
  const auto fl = OscillationOperator::fluc(0.25);
  EXPECT_EQ(fl.name(), "FLUC(0.25)");
  EXPECT_EQ(OscillationOperator::maximal().name(), "MAX");
  EXPECT_DOUBLE_EQ(fl.with_constant(3.0).bound_shape(2.0), 1.5);
  const auto g = fl.grid(16, 1.0);
  EXPECT_DOUBLE_EQ(g.front(), 0.0625);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) EXPECT_DOUBLE_EQ(g[i], 2 * g[i - 1]);
  const auto m = OscillationOperator::maximal().grid(4, 2.0);
  EXPECT_DOUBLE_EQ(m.front(), 0.25);
  EXPECT_DOUBLE_EQ(m.back(), 2.0);
  EXPECT_TRUE(OscillationOperator::maximal().grid(4, 0.0).empty());
  EXPECT_THROW(OscillationOperator::fluc(0.0), InvalidParameter);
  EXPECT_THROW(OscillationOperator::maximal(-1.0), InvalidParameter);
}

TEST(Operator, FlucEventEquivalence) {
  Stream rng(5, {});
  for (int t = 0; t < 300; ++t) {
    std::vector<double> x(1 + rng.below(30));
    for (auto& v : x) v = rng.normal();
    const double eps = 0.05 + rng.uniform01();
    const auto op = OscillationOperator::fluc(eps);
    const auto c = fluc_count_only(std::span<const double>(x), eps);
    for (std::size_t k = 0; k <= x.size(); ++k)
      ASSERT_EQ(op.at_least(std::span<const double>(x), eps * std::sqrt(static_cast<double>(k))), c >= k);
  }
}

TEST(DiscreteWeakType, Examples) {
  const auto maxop = OscillationOperator::maximal();
  const CyclicSystem<double> zero(3, std::vector<double>(6, 0.0));
  const auto z = discrete_weak_type_check(maxop, zero, 0.1);
  EXPECT_EQ(z.lhs_count, 0u);
  EXPECT_TRUE(z.ok);

  // k = 3 sees (0, 1/2), k = 4 sees (1, 1/2); k = 1, 2 see only zeros.
  const CyclicSystem<double> spike(2, {1, 0, 0, 0});
  const auto r = discrete_weak_type_check(maxop, spike, 0.4);
  EXPECT_EQ(r.lhs_count, 2u);
  EXPECT_DOUBLE_EQ(r.rhs_bound, 2.5);
  EXPECT_TRUE(r.ok);
  const CyclicSystem<Rational> spike_q(2, qs({"1", "0", "0", "0"}));
  EXPECT_EQ(discrete_weak_type_check(maxop, spike_q, 0.5).lhs_count, 2u);
  EXPECT_EQ(discrete_weak_type_check(maxop, spike_q, 0.51).lhs_count, 1u);

  Stream rng(6, {});
  const auto g = sample_cyclic(Family::Gaussian, 9, rng);
  const auto fl = OscillationOperator::fluc(0.3);
  EXPECT_EQ(discrete_weak_type_check(fl, g, 0.3 * 3.0 + 1e-6).lhs_count, 0u);
  EXPECT_THROW(discrete_weak_type_check(fl, g, 0.0), InvalidParameter);
  const auto vals = cyclic_operator_values(fl, g);
  EXPECT_EQ(discrete_weak_type_check(fl, vals, g.abs_sum(), 0.4).lhs_count,
            discrete_weak_type_check(fl, g, 0.4).lhs_count);
}

TEST(EstimateConstant, Examples) {
  const std::vector<std::size_t> Ks{4, 8};
  EXPECT_EQ(estimate_constant(OscillationOperator::maximal(), Ks, Family::Zero, 3, 1).c_hat, 0.0);
  EXPECT_EQ(estimate_constant(OscillationOperator::fluc(0.5), Ks, Family::Zero, 3, 1).c_hat, 0.0);
  // a unit spike at K = 2 attains ratio 1 at a = 1/2 (two hits, sum|f| = 1)
  const std::vector<std::size_t> K2{2};
  const auto e = estimate_constant(OscillationOperator::maximal(), K2, Family::UnitSpike, 1, 3);
  EXPECT_DOUBLE_EQ(e.c_hat, 1.0);
  EXPECT_DOUBLE_EQ(e.argmax.a, 0.5);
  EXPECT_THROW(estimate_constant(OscillationOperator::maximal(), std::span<const std::size_t>{}, Family::Zero, 1, 1),
               InvalidParameter);
  EXPECT_THROW(estimate_constant(OscillationOperator::maximal(), Ks, Family::Zero, 0, 1), InvalidParameter);
}

TEST(EstimateConstant, MoreTrialsNeverDecrease) {
  const std::vector<std::size_t> Ks{8, 16};
  for (auto fam : {Family::RandomIndicator, Family::Gaussian}) {
    const auto op = OscillationOperator::fluc(0.25);
    const double c10 = estimate_constant(op, Ks, fam, 10, 42).c_hat;
    const double c20 = estimate_constant(op, Ks, fam, 20, 42).c_hat;
    EXPECT_GE(c20, c10);
  }
}

TEST(EstimateConstant, ParallelMatchesSerial) {
  const std::vector<std::size_t> Ks{8, 32};
  for (const auto& op : {OscillationOperator::fluc(0.25), OscillationOperator::maximal()}) {
    const auto p = estimate_constant(op, Ks, Family::Gaussian, 6, 9);
    const auto s = serial::estimate_constant(op, Ks, Family::Gaussian, 6, 9);
    EXPECT_EQ(p.c_hat, s.c_hat);
    ASSERT_EQ(p.rows.size(), s.rows.size());
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
      EXPECT_EQ(p.rows[i].lhs, s.rows[i].lhs);
      EXPECT_EQ(p.rows[i].a, s.rows[i].a);
    }
  }
  Stream rng(10, {});
  const auto sys = sample_cyclic(Family::Gaussian, 40, rng);
  EXPECT_EQ(cyclic_operator_values(OscillationOperator::fluc(0.2), sys),
            serial::cyclic_operator_values(OscillationOperator::fluc(0.2), sys));
}

TEST(WeakTypeSweep, UsesOperatorConstant) {
  const std::vector<std::size_t> Ks{2};
  const auto rows = weak_type_sweep(OscillationOperator::maximal(0.5), Ks, Family::UnitSpike, 1, 3);
  bool any_fail = false;
  for (const auto& r : rows) any_fail = any_fail || !r.ok;
  EXPECT_TRUE(any_fail);  // ratio 1 > 0.5 somewhere
  for (const auto& r : weak_type_sweep(OscillationOperator::maximal(1.0), Ks, Family::UnitSpike, 1, 3)) EXPECT_TRUE(r.ok);
}

TEST(TransferBound, Examples) {
  const auto sys = three_cycle();
  const auto r = transfer_bound(sys, OscillationOperator::maximal(), 2, 0.6);
  EXPECT_EQ(r.mu_value, make_rational(1, 3));
  EXPECT_NEAR(r.bound, 1.0 / 0.6 / 3.0, 1e-12);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(transfer_bound(sys, OscillationOperator::maximal(), 2, 1.5).mu_value, 0);
  const PermutationSystem<Rational> zero(FiniteProbSpace::uniform(3), Automorphism::cycle(3),
                                         SimpleFunction<Rational>::constant(3, 0));
  const auto z = transfer_bound(zero, OscillationOperator::fluc(0.1), 3, 0.05);
  EXPECT_EQ(z.mu_value, 0);
  EXPECT_TRUE(z.ok);
}

TEST(IdentityCheck, Examples) {
  const auto sys = three_cycle();
  const auto r = transference_identity_check(sys, OscillationOperator::maximal(), 2, 0.6);
  EXPECT_TRUE(r.ok);
  ASSERT_EQ(r.mu.size(), 5u);
  for (const auto& m : r.mu) EXPECT_EQ(m, make_rational(1, 3));
  EXPECT_EQ(r.average, make_rational(1, 3));
  const PermutationSystem<Rational> fixed(FiniteProbSpace(qs({"1/6", "1/2", "1/3"})), Automorphism::identity(3),
                                          SimpleFunction<Rational>(qs({"1", "-2", "1/2"})));
  EXPECT_TRUE(transference_identity_check(fixed, OscillationOperator::fluc(0.3), 4, 0.2).ok);
  EXPECT_TRUE(transference_identity_check(fixed, OscillationOperator::maximal(), 4, 0.7).ok);
}

TEST(FlucReport, Examples) {
  const auto sys = three_cycle();
  const std::vector<double> grid{1.0, 2.0};
  const auto rows = fluc_weak_type_report(sys, 0.4, grid, 3, 1.0);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].mu_value, make_rational(2, 3));  // counts over the orbits: 0, 1, 1
  EXPECT_EQ(rows[1].mu_value, 0);
  EXPECT_NEAR(rows[0].bound, (1.0 / 3.0) / 0.4, 1e-12);
  const std::vector<double> big{4.0};
  EXPECT_EQ(fluc_weak_type_report(sys, 0.4, big, 3, 1.0)[0].mu_value, 0);
  const std::vector<double> bad{0.0};
  EXPECT_THROW(fluc_weak_type_report(sys, 0.4, bad, 3, 1.0), InvalidParameter);
  EXPECT_THROW(fluc_weak_type_report(sys, 1.0, grid, 3, 1.0), InvalidParameter);

  const CyclicSystem<double> zero(4, std::vector<double>(8, 0.0));
  for (const auto& row : fluc_weak_type_report(zero, 0.3, grid, 1.0)) EXPECT_EQ(row.mu_value, 0);
}

TEST(FlucReport, CyclicMatchesPermutationForm) {
  Stream rng(12, {});
  for (int t = 0; t < 10; ++t) {
    const auto cyc = sample_cyclic(Family::Gaussian, 6, rng);
    const auto perm = as_permutation_system(cyc);
    const std::vector<double> grid{1, 2, 3, 5};
    const auto a = fluc_weak_type_report(cyc, 0.2, grid, 1.3);
    const auto b = fluc_weak_type_report(perm, 0.2, grid, 6, 1.3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_EQ(a[i].mu_value, b[i].mu_value);
      EXPECT_NEAR(a[i].bound, b[i].bound, 1e-12);
    }
  }
}

class TransferProperties : public ::testing::TestWithParam<int> {};

TEST_P(TransferProperties, IdentityHoldsExactly) {
  Stream rng(13, {static_cast<std::uint64_t>(GetParam())});
  const auto sys = random_rational_system(rng, 1, 12);
  const std::size_t K = 1 + rng.below(6);
  for (const auto& op : {OscillationOperator::fluc(0.25), OscillationOperator::maximal()}) {
    for (double a : {0.1, 0.5, 1.0}) ASSERT_TRUE(transference_identity_check(sys, op, K, a).ok) << op.name() << " a=" << a;
  }
}

// If the discrete inequality holds with constant c for every f_w, then the
// transferred inequality holds with constant 2c: averaging over k in [1;K],
// where the cyclic description needs no wrap-around, gives
// mu(E_0) <= (1/K) * c/a * sum_{i<=2K} mu(|f o tau^i|) = 2c ||f||_1 / a.
TEST_P(TransferProperties, DiscreteInequalityTransfers) {
  Stream rng(14, {static_cast<std::uint64_t>(GetParam())});
  const auto sys = random_rational_system(rng, 2, 12);
  const std::size_t K = 1 + rng.below(5);
  for (const auto& unit : {OscillationOperator::fluc(0.25), OscillationOperator::maximal()}) {
    for (double a : {0.2, 0.6}) {
      double c = 0.0;  // least constant making the discrete inequality hold for every f_w
      for (std::size_t w = 0; w < sys.size(); ++w) {
        const auto fw = orbit_restriction(sys, w, K);
        const auto chk = discrete_weak_type_check(unit, fw, a);
        if (chk.lhs_count > 0) c = std::max(c, static_cast<double>(chk.lhs_count) * a / to_double(fw.abs_sum()));
      }
      const auto op = unit.with_constant(2.0 * c);
      for (std::size_t w = 0; w < sys.size(); ++w) ASSERT_TRUE(discrete_weak_type_check(op, orbit_restriction(sys, w, K), a).ok);
      ASSERT_TRUE(transfer_bound(sys, op, K, a).ok) << unit.name() << " a=" << a << " c=" << c;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, TransferProperties, ::testing::Range(0, 60));
