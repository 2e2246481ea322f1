#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "limsup/formulas.hpp"

using namespace limsup;

namespace {

ApproximatingFunction pl(double p) { return ApproximatingFunction::power_log(1, 1, p); }

}  // namespace

TEST(Dimension, RynneDickinsonValues) {
  EXPECT_NEAR(dim_rynne_dickinson(1, 2, {1, 3}), 1.25, 1e-15);
  EXPECT_NEAR(dim_rynne_dickinson(1, 1, {2}), 2.0 / 3.0, 1e-15);
  // n = 2, m = 1, τ = 3: (n-1)m + (m+n)/(1+τ)
  EXPECT_NEAR(dim_rynne_dickinson(2, 1, {3}), 1.75, 1e-15);
  EXPECT_THROW(dim_rynne_dickinson(1, 2, {0.3, 0.4}), Inapplicable);
  EXPECT_THROW(dim_rynne_dickinson(2, 1, {1.5}), Inapplicable);
}

TEST(Dimension, WangWuReducesToRynneDickinsonForOnePoint) {
  for (auto tau : std::vector<std::vector<double>>{{1, 3}, {0.7, 0.9, 2.0}, {2}}) {
    double rd = dim_rynne_dickinson(1, static_cast<int>(tau.size()), tau);
    EXPECT_NEAR(dim_wang_wu(static_cast<int>(tau.size()), TauSpectrum({tau})), rd, 1e-12);
  }
}

TEST(Verdict, LogarithmicThresholds) {
  EXPECT_EQ(lebesgue_verdict(ProblemInstance::nonweighted(1, pl(-2))).outcome, Outcome::Zero);
  EXPECT_EQ(lebesgue_verdict(ProblemInstance::nonweighted(1, pl(-1))).outcome, Outcome::Full);
  EXPECT_EQ(lebesgue_verdict(ProblemInstance::multiplicative(2, pl(-3))).outcome, Outcome::Zero);
  EXPECT_EQ(lebesgue_verdict(ProblemInstance::multiplicative(2, pl(-2))).outcome, Outcome::Full);
}

TEST(Verdict, EveryVerdictCarriesAnAudit) {
  auto v = lebesgue_verdict(ProblemInstance::nonweighted(1, pl(-1)));
  EXPECT_FALSE(v.audit.empty());
  EXPECT_EQ(v.theorem, Theorem::KhintchineGroshev);
  EXPECT_TRUE(v.series.has_value());
}

TEST(Verdict, DivergenceNeedsMonotonicityInOneDimension) {
  // ψ = 1/q on odd q and 0 elsewhere: Σ ψ diverges but ψ is not monotone
  std::vector<double> vals(1 << 12);
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = (i % 2 == 0) ? 1.0 / (i + 1) : 0.0;
  auto v = lebesgue_verdict(ProblemInstance::nonweighted(1, ApproximatingFunction::table(1, vals)));
  EXPECT_EQ(v.outcome, Outcome::Inapplicable);
}

TEST(Verdict, WeightedHausdorffAroundTheFlip) {
  WeightSystem ws({ApproximatingFunction::power(1, 1), ApproximatingFunction::power(1, 3)});
  auto above = hausdorff_verdict(ProblemInstance::weighted(ws), DimensionFunction::power(1.3));
  auto below = hausdorff_verdict(ProblemInstance::weighted(ws), DimensionFunction::power(1.2));
  EXPECT_EQ(above.outcome, Outcome::Zero);
  EXPECT_EQ(below.outcome, Outcome::Full);
  EXPECT_EQ(above.theorem, Theorem::WeightedHausdorff);
}

TEST(Verdict, JarnikAtTheDimension) {
  // ψ = q^{-2}: H^s is zero above 2/3 and infinite below
  auto inst = ProblemInstance::nonweighted(1, ApproximatingFunction::power(1, 2));
  EXPECT_EQ(hausdorff_verdict(inst, DimensionFunction::power(0.7)).outcome, Outcome::Zero);
  EXPECT_EQ(hausdorff_verdict(inst, DimensionFunction::power(0.6)).outcome, Outcome::Full);
}

TEST(Verdict, MultiplicativeOneDimensionalRoute) {
  // n = 1, ψ = q^{-2}, m = 2: dimension 1 + 2/3
  auto inst = ProblemInstance::multiplicative(2, ApproximatingFunction::power(1, 2));
  auto below = hausdorff_verdict(inst, DimensionFunction::power(1.5));
  auto above = hausdorff_verdict(inst, DimensionFunction::power(1.8));
  EXPECT_EQ(below.theorem, Theorem::HussainSimmons);
  EXPECT_EQ(below.outcome, Outcome::Full);
  EXPECT_EQ(above.outcome, Outcome::Zero);
  for (const auto& v : hausdorff_verdicts_all(inst, DimensionFunction::power(1.5)))
    EXPECT_NE(v.theorem, Theorem::MultHausdorffLog);
}

TEST(Fourier, PaperValues) {
  WeightSystem ws({ApproximatingFunction::constant(1, 1), ApproximatingFunction::power(1, 2)});
  auto w = fourier_dim(ProblemInstance::weighted(ws));
  ASSERT_TRUE(w.value);
  EXPECT_EQ(*w.value, 2.0 / 3.0);
  auto m = fourier_dim(ProblemInstance::multiplicative(2, ApproximatingFunction::power(1, 2)));
  ASSERT_TRUE(m.value);
  EXPECT_EQ(*m.value, 1.0);
  EXPECT_FALSE(w.audit.empty());
}

TEST(Fourier, ProductRules) {
  EXPECT_EQ(fdim_product({2.0 / 3.0, 2.0}, true), 2.0 / 3.0);
  EXPECT_NEAR(hdim_product({{0.5, 1}, {1.0, 1}}), 1.5, 1e-15);
}
