#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "limsup/resonant.hpp"

using namespace limsup;

namespace {

// Fraction of a fine midpoint grid on [0,1] satisfying pred.
template <class Pred>
double grid_fraction(Pred pred, int points = 2000000) {
  std::size_t hits = 0;
  for (int i = 0; i < points; ++i) hits += pred((i + 0.5) / points);
  return static_cast<double>(hits) / points;
}

double frac_dist(double y) { return std::abs(y - std::round(y)); }

}  // namespace

TEST(Resonant, WeightedMeasureIsProductOfTwoDelta) {
  auto d = ResonantDescriptor::weighted(LatticePoint::scalar(7), {0.1, 0.02});
  EXPECT_NEAR(measure_exact(d), 0.2 * 0.04, 1e-15);
  auto one = ResonantDescriptor::weighted(LatticePoint::scalar(3), {0.05});
  EXPECT_NEAR(measure_exact(one), grid_fraction([](double x) { return frac_dist(3 * x) < 0.05; }), 1e-5);
}

TEST(Resonant, CoprimeMeasureMatchesTotientCount) {
  for (std::int64_t q = 2; q <= 60; ++q) {
    double delta = 1.0 / static_cast<double>(q * q);
    std::int64_t phi = 0;
    for (std::int64_t p = 1; p <= q; ++p) phi += std::gcd(p, q) == 1;
    auto set = resonant_intervals_1d<double>(q, delta, true, 0.0);
    EXPECT_NEAR(set.measure(), 2 * delta * phi / static_cast<double>(q), 1e-14) << q;
  }
}

TEST(Resonant, StarVolumeClosedForm) {
  // P(U1 U2 < t) = t (1 - ln t)
  for (double t : {0.01, 0.1, 0.5, 0.9}) EXPECT_NEAR(v_m(2, t), t * (1 - std::log(t)), 1e-14);
  // m = 3: t (1 - ln t + ln^2 t / 2)
  double t = 0.05;
  EXPECT_NEAR(v_m(3, t), t * (1 - std::log(t) + std::log(t) * std::log(t) / 2), 1e-14);
}

TEST(Resonant, MonteCarloAgreesWithExact) {
  auto d = ResonantDescriptor::mult(LatticePoint::scalar(1), 2, 1.0 / 64);
  double exact = measure_exact(d);
  auto mc = measure_mc(d, 400000, 11);
  EXPECT_LT(std::abs(mc.value - exact), 4 * mc.std_error);
  auto w = ResonantDescriptor::weighted(LatticePoint({2, -1}), {0.1, 0.2});
  auto mw = measure_mc(w, 400000, 12);
  EXPECT_LT(std::abs(mw.value - measure_exact(w)), 4 * mw.std_error);
}

TEST(Dyadic, IndicesAreTheWeakCompositions) {
  for (int m = 1; m <= 4; ++m) {
    for (int N = m; N <= 12; ++N) {
      auto idx = dyadic_decompose(m, std::ldexp(1.0, -N));
      std::set<std::vector<int>> got;
      for (const auto& d : idx) {
        EXPECT_EQ(std::accumulate(d.k.begin(), d.k.end(), 0), N - m);
        EXPECT_EQ(d.N, N);
        got.insert(d.k);
      }
      EXPECT_EQ(got.size(), idx.size());
      EXPECT_EQ(static_cast<double>(idx.size()), binomial(N - 1, m - 1));
    }
  }
  EXPECT_EQ(dyadic_decompose(2, std::ldexp(1.0, -5)).size(), 4u);
}

TEST(Dyadic, LevelOfNonDyadicDelta) {
  EXPECT_EQ(dyadic_N(0.25), 2);
  EXPECT_EQ(dyadic_N(0.2), 2);
  EXPECT_EQ(dyadic_N(0.126), 2);
  EXPECT_EQ(dyadic_N(0.125), 3);
  EXPECT_THROW(dyadic_N(0.0), DomainError);
}

TEST(Sandwich, NoViolationsForSmallGaps) {
  for (int m : {2, 3}) {
    auto rep = sandwich_check(LatticePoint::scalar(5), m, std::ldexp(1.0, -8), 50000, 3);
    EXPECT_EQ(rep.violations(), 0u) << m;
    EXPECT_GT(rep.in_inner, 0u);
  }
}

TEST(Sandwich, LeftInclusionFailsWhenCoprimeGapsExceedTwo) {
  // residues coprime to 6 are 1 and 5; the gap 4 breaks the inner inclusion
  auto rep = sandwich_check(LatticePoint::scalar(6), 2, std::ldexp(1.0, -8), 50000, 3);
  EXPECT_GT(rep.left_violations, 0u);
  EXPECT_EQ(rep.right_violations, 0u);
}

TEST(Quasi, PairwiseIntersectionMatchesGrid) {
  auto a = ResonantDescriptor::weighted(LatticePoint::scalar(3), {0.07});
  auto b = ResonantDescriptor::weighted(LatticePoint::scalar(5), {0.04});
  double grid = grid_fraction([](double x) { return frac_dist(3 * x) < 0.07 && frac_dist(5 * x) < 0.04; });
  EXPECT_NEAR(pairwise_intersection_1d(a, b), grid, 2e-5);
}

TEST(Quasi, DyadicUnionMatchesMonteCarloOfUnion) {
  auto d = ResonantDescriptor::mult(LatticePoint::scalar(3), 2, 1.0 / 64);
  double v = dyadic_union_measure_1d(d);
  // brute: point lies in some R(q, 2^{-k}) with k ∈ A_2(δ), on a grid
  auto idx = dyadic_decompose(2, 1.0 / 64);
  std::size_t hits = 0, total = 0;
  const int G = 1000;
  for (int i = 0; i < G; ++i) {
    for (int j = 0; j < G; ++j) {
      double x[2] = {(i + 0.5) / G, (j + 0.5) / G};
      bool in = false;
      for (const auto& k : idx) {
        bool all = true;
        for (int c = 0; c < 2 && all; ++c) all = frac_dist(3 * x[c]) < std::ldexp(1.0, -k.k[c]);
        if (all) {
          in = true;
          break;
        }
      }
      hits += in;
      ++total;
    }
  }
  EXPECT_NEAR(v, static_cast<double>(hits) / total, 2e-3);
}

TEST(Quasi, ReportFloorsAtOne) {
  std::vector<ResonantDescriptor> fam;
  for (std::int64_t q = 1; q <= 12; ++q) fam.push_back(ResonantDescriptor::weighted(LatticePoint::scalar(q), {0.5 / q}));
  auto rep = quasi_independence_report(fam);
  EXPECT_GE(rep.c, 1.0);
  EXPECT_EQ(rep.pairs_used + rep.pairs_excluded, 66u);
  EXPECT_NEAR(rep.lamperti_bound, 1 / rep.c, 1e-15);
  EXPECT_TRUE(rep.exact);
}
