#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "limsup/content.hpp"

using namespace limsup;

namespace {

// Brute argmin of a_1⋯a_i · a_{i+1}^{-i} · a_{i+1}^s over i, on sides sorted
// in decreasing order, computed directly from the product definition.
int oracle_argmin(std::vector<double> a, double s) {
  std::sort(a.begin(), a.end(), std::greater<>());
  int best = -1;
  double bv = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double v = 1;
    for (std::size_t j = 0; j < i; ++j) v *= a[j];
    v *= std::pow(a[i], s - static_cast<double>(i));
    if (best < 0 || v < bv * (1 - 1e-12)) {
      best = static_cast<int>(i);
      bv = v;
    }
  }
  return best;
}

}  // namespace

TEST(RectContent, ArgminMatchesBruteProduct) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(std::log(1e-3), 0.0), frac(0.05, 0.95);
  for (int d = 1; d <= 5; ++d) {
    for (int t = 0; t < 200; ++t) {
      std::vector<double> sides(d);
      for (auto& a : sides) a = std::exp(u(gen));
      int k = static_cast<int>(gen() % d);
      double s = k + frac(gen);
      Rect r(sides);
      auto f = DimensionFunction::power(s, kInf);
      EXPECT_EQ(content_argmin(r, f).first, oracle_argmin(sides, s));
      EXPECT_EQ(content_argmin(r, f).first, k);
      EXPECT_EQ(rect_content_formula(r, f).bracket_k, k);
    }
  }
}

TEST(RectContent, CubeContentIsFOfSide) {
  for (double s : {0.5, 1.5, 2.5}) {
    Rect cube({0.1, 0.1, 0.1});
    auto f = DimensionFunction::power(s, kInf);
    EXPECT_NEAR(rect_content_formula(cube, f).formula_value, std::pow(0.1, s), 1e-14);
  }
}

TEST(RectContent, WorkedRectangle) {
  // sides 1/4 and 1/16 with f = r^1.5: k = 1, content = a1 · a2^{-1} · a2^{1.5}
  Rect r({0.25, 0.0625});
  auto f = DimensionFunction::power(1.5, kInf);
  auto est = rect_content_formula(r, f);
  EXPECT_EQ(est.bracket_k, 1);
  EXPECT_NEAR(est.formula_value, 0.25 * std::pow(0.0625, 0.5), 1e-15);
}

TEST(RectContent, GreedyCoverWithinConstant) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(std::log(1e-3), 0.0), frac(0.05, 0.95);
  for (int d = 1; d <= 4; ++d) {
    for (int t = 0; t < 50; ++t) {
      std::vector<double> sides(d);
      for (auto& a : sides) a = std::exp(u(gen));
      auto f = DimensionFunction::power(static_cast<double>(gen() % d) + frac(gen), kInf);
      Rect r(sides);
      double formula = rect_content_formula(r, f).formula_value;
      double cover = greedy_cover_oracle(r, f);
      EXPECT_GE(cover, formula * (1 - 1e-12));
      EXPECT_LE(cover, std::pow(4.0, d) * formula);
    }
  }
}

TEST(RectContent, MassDistributionLowerBound) {
  Rect r({0.5, 0.02});
  auto f = DimensionFunction::power(1.4, kInf);
  BallSpec spec;
  spec.count = 500;
  auto est = content_estimate(r, f, spec);
  ASSERT_TRUE(est.mdp_lower && est.cover_upper);
  EXPECT_LE(*est.mdp_lower, est.formula_value * (1 + 1e-12));
  EXPECT_GE(*est.mdp_lower, est.formula_value / 16);
  EXPECT_LE(*est.mdp_lower, *est.cover_upper);
}

TEST(RectContent, SidesValidated) {
  EXPECT_THROW(Rect(std::vector<double>{}), DomainError);
  EXPECT_THROW(Rect({0.5, 0.0}), DomainError);
  EXPECT_THROW(Rect({1.5}), DomainError);
}

TEST(AtomicMeasure, UniformWeightsSumToOne) {
  auto mu = AtomicMeasure::uniform(2, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  ASSERT_EQ(mu.size(), 3u);
  double w = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) w += mu.weight(i);
  EXPECT_NEAR(w, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(mu.atom(1)[0], 0.3);
}
