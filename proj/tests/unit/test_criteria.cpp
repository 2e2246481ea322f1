#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "limsup/criteria.hpp"

using namespace limsup;

namespace {

WeightSystem ws13() { return WeightSystem({ApproximatingFunction::power(1, 1), ApproximatingFunction::power(1, 3)}); }

}  // namespace

TEST(Phi, WorkedInstance) {
  std::int64_t q[1] = {2};
  auto pc = phi_construction(ws13(), DimensionFunction::power(1.5), std::span<const std::int64_t>(q, 1));
  EXPECT_EQ(pc.k, 2);
  EXPECT_DOUBLE_EQ(pc.varpi, 0.25);
  ASSERT_EQ(pc.phi_values.size(), 2u);
  EXPECT_DOUBLE_EQ(pc.phi_values[0], 0.5);
  EXPECT_DOUBLE_EQ(pc.phi_values[1], 0.5);
  EXPECT_NEAR(pc.t, 0.0625, 1e-15);
  EXPECT_TRUE(check_phi(pc).all());
  auto rect = weighted_rect_sides(pc);
  EXPECT_DOUBLE_EQ(rect[0], 0.25);
  EXPECT_DOUBLE_EQ(rect[1], 0.0625);
}

TEST(Phi, ProductIdentityOnRandomInstances) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> tau(0.1, 3.0), frac(0.1, 0.9);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    int m = 2 + static_cast<int>(gen() % 3);
    std::vector<double> psi(m);
    std::int64_t Q = 2 + static_cast<std::int64_t>(gen() % 5000);
    for (auto& v : psi) v = std::pow(static_cast<double>(Q), -tau(gen));
    auto f = DimensionFunction::power(static_cast<double>(gen() % m) + frac(gen), kInf);
    try {
      auto pc = phi_construction(psi, 1, Q, f);
      double prod = 1;
      for (double v : pc.phi_values) prod *= v;
      EXPECT_NEAR(prod / (pc.t * std::pow(static_cast<double>(Q), m)), 1.0, 1e-9);
      EXPECT_TRUE(check_phi(pc).all());
      ++checked;
    } catch (const Inapplicable&) {
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Series, KGSymbolicClassification) {
  auto conv = series_sum(SeriesDescriptor(SeriesKind::KG, ProblemInstance::nonweighted(1, ApproximatingFunction::power(1, 2))), 10);
  EXPECT_EQ(conv.classification, Classification::ConvergesSymbolic);
  auto div = series_sum(SeriesDescriptor(SeriesKind::KG, ProblemInstance::nonweighted(1, ApproximatingFunction::power(1, 1))), 10);
  EXPECT_EQ(div.classification, Classification::DivergesSymbolic);
}

TEST(Series, BlockSumsMatchDirectEnumeration) {
  // n = 2, ψ(q) = |q|^{-1.5}, m = 1: Σ over 2^k ≤ |q| < 2^{k+1} of ψ(q)
  auto inst = ProblemInstance::nonweighted(1, ApproximatingFunction::power(2, 1.5));
  auto est = series_sum(SeriesDescriptor(SeriesKind::KG, inst), 6);
  for (auto [k, v] : est.block_sums) {
    double direct = 0;
    std::int64_t lo = std::int64_t{1} << k, hi = std::int64_t{1} << (k + 1);
    for (std::int64_t a = -hi; a <= hi; ++a)
      for (std::int64_t b = -hi; b <= hi; ++b) {
        std::int64_t nrm = std::max(std::llabs(a), std::llabs(b));
        if (nrm >= lo && nrm < hi) direct += std::pow(static_cast<double>(nrm), -1.5);
      }
    EXPECT_NEAR(v / direct, 1.0, 1e-12) << k;
  }
}

TEST(Series, HeuristicForTables) {
  std::vector<double> vals(1 << 12);
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = 1.0 / std::pow(static_cast<double>(i + 1), 2);
  auto inst = ProblemInstance::nonweighted(1, ApproximatingFunction::table(1, vals));
  auto est = series_sum(SeriesDescriptor(SeriesKind::KG, inst), 11);
  EXPECT_EQ(est.classification, Classification::ConvergesHeuristic);
  ASSERT_TRUE(est.growth_exponent.has_value());
  EXPECT_NEAR(*est.growth_exponent, -1.0, 0.05);
}

TEST(Series, DescriptorRejectsMixedModes) {
  auto mult = ProblemInstance::multiplicative(2, ApproximatingFunction::power(1, 1));
  EXPECT_THROW(SeriesDescriptor(SeriesKind::KG, mult), DomainError);
  auto plain = ProblemInstance::nonweighted(1, ApproximatingFunction::power(1, 1));
  EXPECT_THROW(SeriesDescriptor(SeriesKind::Jarnik, plain), DomainError);
}

TEST(Critical, SymbolicAndBisectionAgree) {
  auto inst = ProblemInstance::nonweighted(1, ApproximatingFunction::power(1, 2));
  auto sym = critical_exponent(CriticalKind::s_psi, inst);
  ASSERT_TRUE(sym.value);
  EXPECT_NEAR(*sym.value, 1.0 / 3.0, 1e-15);
  auto bis = critical_exponent(CriticalKind::s_psi, inst, true, 14);
  ASSERT_TRUE(bis.value);
  EXPECT_NEAR(*bis.value, 1.0 / 3.0, 0.02);
}

TEST(Critical, WeightedFlip) {
  auto flip = weighted_hausdorff_flip(ws13(), 1e-9, 2 - 1e-9);
  ASSERT_TRUE(flip.has_value());
  EXPECT_NEAR(*flip, 1.25, 1e-9);
}

TEST(LatticeSum, AgreesWithBruteForce) {
  for (auto deltas : std::vector<std::vector<double>>{{0.5, 0.25}, {0.125, 0.5}, {0.0625, 0.03125}, {0.25, 0.125, 0.5}}) {
    for (double s : {0.5, 1.5}) {
      if (s >= static_cast<double>(deltas.size())) continue;
      EXPECT_NEAR(lattice_sum(deltas, s).value / lattice_sum_brute(deltas, s), 1.0, 1e-9);
    }
  }
  EXPECT_THROW(lattice_sum({0.5, 0.25}, 1.0), DomainError);
  EXPECT_THROW(lattice_sum({0.75}, 0.5), DomainError);
}

TEST(MultCover, LogtermPartialBelowBound) {
  auto mc = mult_cover_fvolume(2, 2, 3, std::ldexp(1.0, -12), DimensionFunction::power(3.5, kInf));
  ASSERT_TRUE(mc.logterm_partial && mc.logterm_bound && mc.bound_without_log);
  EXPECT_LT(*mc.logterm_partial, *mc.logterm_bound);
  EXPECT_LE(*mc.bound_without_log, mc.bound_with_log);
  EXPECT_GT(mc.exact, 0.0);
}

TEST(MultCover, ReductionKeepsPhiAbovePsi) {
  double psi = 1e-4;
  auto r = mulhs_reduction(psi, 2, 2, 50, DimensionFunction::power(3.5, kInf));
  EXPECT_TRUE(r.regime_ok);
  EXPECT_TRUE(r.phi_ge_psi);
  EXPECT_GE(r.phi, psi);
}
