#include <gtest/gtest.h>

#include "ergo/measure.hpp"
#include "ergo/random.hpp"
#include "support.hpp"

using namespace ergo;
using testing_support::q;
using testing_support::qs;

TEST(Numeric, ParseRationalForms) {
  EXPECT_EQ(parse_rational("3/6"), make_rational(1, 2));
  EXPECT_EQ(parse_rational("-4"), Rational(-4));
  EXPECT_EQ(parse_rational("-2.5"), make_rational(-5, 2));
  EXPECT_EQ(parse_rational("0.125"), make_rational(1, 8));
  EXPECT_EQ(parse_rational("1.5e-3"), make_rational(3, 2000));
  EXPECT_EQ(parse_rational("2E2"), Rational(200));
  EXPECT_EQ(to_string(make_rational(6, -4)), "-3/2");
  EXPECT_EQ(decimal(0.1), make_rational(1, 10));
  EXPECT_EQ(decimal(1e-7), make_rational(1, 10000000));
  EXPECT_NE(exact(0.1), make_rational(1, 10));
  EXPECT_THROW(parse_rational("1/0"), InvalidParameter);
  EXPECT_THROW(parse_rational("abc"), InvalidParameter);
  EXPECT_THROW(parse_rational(""), InvalidParameter);
}

TEST(Numeric, CeilToU64) {
  EXPECT_EQ(ceil_to_u64(0.0), 0u);
  EXPECT_EQ(ceil_to_u64(2.01), 3u);
  EXPECT_EQ(ceil_to_u64(make_rational(7, 2)), 4u);
  EXPECT_EQ(ceil_to_u64(Rational(5)), 5u);
  EXPECT_THROW(ceil_to_u64(1e30), OverflowError);
}

TEST(Space, RejectsBadWeights) {
  EXPECT_THROW(FiniteProbSpace(qs({"1/2", "1/3"})), InvalidParameter);
  EXPECT_THROW(FiniteProbSpace(qs({"3/2", "-1/2"})), InvalidParameter);
  EXPECT_THROW(FiniteProbSpace(std::vector<Rational>{}), InvalidParameter);
  try {
    FiniteProbSpace(qs({"1/2", "3/4"}));
    FAIL();
  } catch (const InvalidParameter& e) {
    EXPECT_NE(std::string(e.what()).find("5/4"), std::string::npos);
  }
}

TEST(Measure, Examples) {
  const auto u4 = FiniteProbSpace::uniform(4);
  EXPECT_EQ(measure(u4, EventSet::all(4)), 1);
  EXPECT_EQ(measure(u4, EventSet{}), 0);
  EXPECT_EQ(measure(u4, EventSet({0, 1})), make_rational(1, 2));
  EXPECT_THROW(measure(u4, EventSet({4})), DomainMismatch);
  const FiniteProbSpace s(qs({"1/3", "2/3"}));
  EXPECT_EQ(measure(s, EventSet({1})), make_rational(2, 3));
}

TEST(EventSetTest, SortedUnique) {
  const EventSet e({3, 1, 3, 0});
  ASSERT_EQ(e.members().size(), 3u);
  EXPECT_TRUE(e.contains(3));
  EXPECT_FALSE(e.contains(2));
}

TEST(Integrate, Examples) {
  const auto u3 = FiniteProbSpace::uniform(3);
  EXPECT_EQ(integrate(u3, SimpleFunction<Rational>(qs({"1", "2", "4"}))), make_rational(7, 3));
  EXPECT_EQ(integrate(u3, SimpleFunction<Rational>::constant(3, q("5/7"))), make_rational(5, 7));
  const EventSet e({0, 2});
  EXPECT_EQ(integrate(u3, SimpleFunction<Rational>::indicator(3, e)), measure(u3, e));
  EXPECT_THROW(integrate(u3, SimpleFunction<Rational>(qs({"1", "2"}))), DomainMismatch);
  EXPECT_NEAR(integrate(u3, SimpleFunction<double>({1.0, 2.0, 4.0})), 7.0 / 3.0, 1e-12);
}

TEST(L1Norm, Examples) {
  const auto u2 = FiniteProbSpace::uniform(2);
  EXPECT_EQ(l1_norm(u2, SimpleFunction<Rational>(qs({"-3", "1"}))), 2);
  EXPECT_EQ(l1_norm(u2, SimpleFunction<Rational>::constant(2, 0)), 0);
  const FiniteProbSpace s(qs({"0", "1"}));
  EXPECT_EQ(l1_norm(s, SimpleFunction<Rational>(qs({"9", "0"}))), 0);  // vanishes off null atoms
  const EventSet e({1});
  EXPECT_EQ(l1_norm(s, SimpleFunction<Rational>::indicator(2, e)), measure(s, e));
}

TEST(MeasurePreserving, Examples) {
  const auto u5 = FiniteProbSpace::uniform(5);
  EXPECT_TRUE(is_measure_preserving(u5, Automorphism::identity(5)));
  EXPECT_TRUE(is_measure_preserving(u5, Automorphism::cycle(5)));
  const FiniteProbSpace s(qs({"1/3", "2/3"}));
  EXPECT_FALSE(is_measure_preserving(s, Automorphism({1, 0})));
  EXPECT_THROW(is_measure_preserving(s, Automorphism::identity(3)), DomainMismatch);
}

TEST(AutomorphismTest, Validation) {
  EXPECT_THROW(Automorphism({0, 0}), InvalidParameter);
  EXPECT_THROW(Automorphism({0, 2}), InvalidParameter);
  const Automorphism t({2, 0, 1});
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(t.inverse(t.forward(i)), i);
    EXPECT_EQ(t.forward(t.inverse(i)), i);
  }
  EXPECT_EQ(t.apply_power(0, 3), 0u);
  EXPECT_EQ(t.apply_power(0, 2), t.forward(t.forward(0)));
}

TEST(Compose, Examples) {
  const auto f = SimpleFunction<Rational>(qs({"1", "2", "3"}));
  EXPECT_EQ(compose(f, Automorphism::identity(3)), f);
  EXPECT_EQ(compose(f, Automorphism::cycle(3)), SimpleFunction<Rational>(qs({"2", "3", "1"})));
  const Automorphism t({2, 0, 1});
  const EventSet e({0});
  EXPECT_EQ(compose(SimpleFunction<Rational>::indicator(3, e), t), SimpleFunction<Rational>::indicator(3, preimage(e, t)));
}

// Random measure-preserving systems; all properties exact.
class MeasureProperties : public ::testing::TestWithParam<int> {};

TEST_P(MeasureProperties, IntegralInvarianceAdditivityMonotonicity) {
  Stream rng(2024, {static_cast<std::uint64_t>(GetParam())});
  const auto sys = random_rational_system(rng, 1, 10);
  const auto& space = sys.space();
  const auto n = space.size();
  EXPECT_EQ(integrate(space, compose(sys.f(), sys.tau())), integrate(space, sys.f()));

  std::vector<std::size_t> e, f, both;
  for (std::size_t w = 0; w < n; ++w) {
    const auto r = rng.below(3);
    if (r == 0) e.push_back(w);
    if (r == 1) f.push_back(w);
    if (r != 2) both.push_back(w);
  }
  const EventSet E(e), F(f), EF(both);
  EXPECT_EQ(measure(space, EF), measure(space, E) + measure(space, F));
  EXPECT_LE(measure(space, E), measure(space, EF));

  std::vector<Rational> gv, hv;
  for (std::size_t w = 0; w < n; ++w) {
    gv.push_back(make_rational(static_cast<long>(rng.below(11)) - 5, 3));
    hv.push_back(gv.back() + Rational(static_cast<long>(rng.below(4))));
  }
  const SimpleFunction<Rational> g(gv), h(hv);
  std::vector<Rational> sum;
  for (std::size_t w = 0; w < n; ++w) sum.push_back(2 * sys.f()(w) + g(w));
  EXPECT_EQ(integrate(space, SimpleFunction<Rational>(sum)), 2 * integrate(space, sys.f()) + integrate(space, g));
  EXPECT_LE(integrate(space, g), integrate(space, h));  // g <= h pointwise
  std::vector<Rational> fg;
  for (std::size_t w = 0; w < n; ++w) fg.push_back(sys.f()(w) + g(w));
  EXPECT_LE(l1_norm(space, SimpleFunction<Rational>(fg)), l1_norm(space, sys.f()) + l1_norm(space, g));
}

INSTANTIATE_TEST_SUITE_P(Seeds, MeasureProperties, ::testing::Range(0, 60));
