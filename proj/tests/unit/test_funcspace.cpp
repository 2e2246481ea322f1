#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "limsup/funcspace.hpp"
#include "limsup/lattice.hpp"
#include "limsup/numtheory.hpp"

using namespace limsup;

TEST(DimensionFunction, PowerMatchesPow) {
  auto f = DimensionFunction::power(1.7, 1.0);
  for (double r : {1e-9, 1e-4, 0.01, 0.3, 1.0}) {
    EXPECT_NEAR(f(r), std::pow(r, 1.7), 1e-15 * std::max(1.0, std::pow(r, 1.7)));
    EXPECT_NEAR(f.log_eval(r), 1.7 * std::log(r), 1e-12);
  }
}

TEST(DimensionFunction, PowerLogMatchesDirectFormula) {
  auto f = DimensionFunction::power_log(0.8, -2.0);
  for (double r : {1e-8, 1e-3, 0.1, 0.3}) {
    double direct = std::pow(r, 0.8) * std::pow(std::log(1 / r), -2.0);
    EXPECT_NEAR(f(r) / direct, 1.0, 1e-12);
    EXPECT_NEAR(f.log_eval(r), std::log(direct), 1e-12);
  }
}

TEST(DimensionFunction, DomainIsEnforced) {
  auto f = DimensionFunction::power(1.0);
  EXPECT_THROW(f(0.0), DomainError);
  EXPECT_THROW(f(-0.1), DomainError);
  EXPECT_THROW(f(0.5), DomainError);  // beyond the default cap 1/e
  EXPECT_THROW(DimensionFunction::power(0.0), DomainError);
  // a positive log power shrinks the monotone range to e^{-p/s}
  EXPECT_THROW(DimensionFunction::power_log(1.0, 2.0, 0.3), DomainError);
  EXPECT_NO_THROW(DimensionFunction::power_log(1.0, 2.0, 0.1));
}

TEST(DimensionFunction, TableInterpolatesInLogLog) {
  auto f = DimensionFunction::table({{1e-4, 1e-8}, {1e-2, 1e-3}, {1.0, 1.0}}, 1.0);
  EXPECT_NEAR(f(1e-4), 1e-8, 1e-20);
  EXPECT_NEAR(f(1e-2), 1e-3, 1e-15);
  // geometric midpoint of the first segment
  EXPECT_NEAR(f(1e-3), std::sqrt(1e-8 * 1e-3), 1e-15);
  EXPECT_THROW(DimensionFunction::table({{0.1, 1.0}, {0.2, 0.5}}), DomainError);
}

TEST(OrderRelation, PowersOrderByExponent) {
  auto f = DimensionFunction::power(1.5);
  auto lo = compare(f, 1.0), hi = compare(f, 2.0);
  EXPECT_TRUE(lo.s_strictly_precedes_f);
  EXPECT_FALSE(lo.f_precedes_s);
  EXPECT_TRUE(hi.f_strictly_precedes_s);
  auto eq = compare(DimensionFunction::power(2.0), 2.0);
  EXPECT_TRUE(eq.f_precedes_s);
  EXPECT_TRUE(eq.s_precedes_f);
  EXPECT_FALSE(eq.f_strictly_precedes_s);
}

TEST(OrderRelation, IntegerBracketOfNonIntegralPower) {
  for (double s : {0.3, 1.5, 2.05, 3.95}) {
    auto k = integer_bracket(DimensionFunction::power(s, kInf), 0, 4);
    ASSERT_TRUE(k.has_value()) << s;
    EXPECT_EQ(*k, static_cast<int>(std::floor(s)));
  }
  EXPECT_EQ(bracket(DimensionFunction::power(1.5, kInf), 3), 2);
}

TEST(OrderRelation, LogFactorSitsStrictlyBetween) {
  // r log(1/r) lies strictly between r^1 and r^2 but is not above r^1 ⪯
  auto f = DimensionFunction::power_log(1.0, 1.0, 0.3);
  EXPECT_TRUE(compare(f, 2.0).f_strictly_precedes_s);
  auto c1 = compare(f, 1.0);
  EXPECT_TRUE(c1.f_precedes_s || c1.s_precedes_f);
}

TEST(Regularity, PowerRatioIsAlphaToTheGap) {
  // f(αr)/(f(r)α^{nm}) = α^{s-nm}; for s = nm it is identically 1
  auto b = regularity_check(DimensionFunction::power(2.0, 1.0), 2, 0.5);
  EXPECT_NEAR(b.lo, 1.0, 1e-12);
  EXPECT_NEAR(b.hi, 1.0, 1e-12);
  auto c = regularity_check(DimensionFunction::power(1.5, 1.0), 2, 0.5);
  EXPECT_LE(c.hi, 1.0 + 1e-12);
  EXPECT_LT(c.lo, 1.0);
}

TEST(ApproximatingFunction, PowerAndPowerLogValues) {
  auto p = ApproximatingFunction::power(1, 2.0, 3.0);
  EXPECT_DOUBLE_EQ(p.at_norm(5), 3.0 / 25.0);
  auto pl = ApproximatingFunction::power_log(1, 1.0, -2.0);
  EXPECT_NEAR(pl.at_norm(100), 1.0 / (100 * std::pow(std::log(100.0), 2)), 1e-18);
  // below e the log factor is frozen at 1
  EXPECT_DOUBLE_EQ(pl.at_norm(2), 0.5);
  std::int64_t q[2] = {-3, 2};
  auto p2 = ApproximatingFunction::power(2, 1.0);
  EXPECT_DOUBLE_EQ(p2(std::span<const std::int64_t>(q, 2)), 1.0 / 3.0);
}

TEST(ApproximatingFunction, TableBoundsAndMonotonicity) {
  auto t = ApproximatingFunction::table(1, {0.5, 0.4, 0.45, 0.1});
  EXPECT_DOUBLE_EQ(t.at_norm(3), 0.45);
  EXPECT_THROW(t.at_norm(5), DomainError);
  EXPECT_FALSE(check_non_increasing(t, 4));
  EXPECT_TRUE(check_non_increasing(ApproximatingFunction::power(1, 1.0), 1000));
}

TEST(WeightSystem, ValuesAndRepeat) {
  WeightSystem ws({ApproximatingFunction::power(1, 1), ApproximatingFunction::power(1, 3)});
  std::int64_t q[1] = {2};
  auto v = ws.values(std::span<const std::int64_t>(q, 1));
  ASSERT_EQ(v.size(), 2u);
  EXPECT_DOUBLE_EQ(v[0], 0.5);
  EXPECT_DOUBLE_EQ(v[1], 0.125);
  EXPECT_TRUE(ws.symbolic());
  EXPECT_EQ(WeightSystem::repeated(ApproximatingFunction::power(1, 2), 3).m(), 3);
}

TEST(Lattice, ShellCountMatchesEnumeration) {
  for (int n = 1; n <= 3; ++n) {
    for (std::int64_t q = 1; q <= 6; ++q) {
      EXPECT_EQ(shell_count(n, q), static_cast<double>(enumerate_shell(n, q).size()));
      // direct formula (2q+1)^n - (2q-1)^n
      EXPECT_EQ(shell_count(n, q), std::pow(2.0 * q + 1, n) - std::pow(2.0 * q - 1, n));
    }
  }
}

TEST(NumberTheory, TotientSieveMatchesGcdCount) {
  auto table = totient_sieve(300);
  for (std::int64_t q = 1; q <= 300; ++q) {
    std::int64_t c = 0;
    for (std::int64_t p = 1; p <= q; ++p) c += std::gcd(p, q) == 1;
    EXPECT_EQ(table[q], c) << q;
    EXPECT_EQ(totient(q), c);
  }
}
