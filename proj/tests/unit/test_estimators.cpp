#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "limsup/estimators.hpp"

using namespace limsup;

namespace {

double frac_dist(double y) { return std::abs(y - std::round(y)); }

// Grid estimate of |∪_{lo ≤ q ≤ hi} {x : ‖qx‖ < ψ(q)}| on [0,1].
double grid_union(const ApproximatingFunction& psi, std::int64_t lo, std::int64_t hi, int points) {
  std::size_t hits = 0;
  for (int i = 0; i < points; ++i) {
    double x = (i + 0.5) / points;
    for (std::int64_t q = lo; q <= hi; ++q) {
      if (frac_dist(q * x) < psi.at_norm(q)) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / points;
}

}  // namespace

TEST(Wilson, IntervalContainsProportion) {
  auto [lo, hi] = wilson99(30, 100);
  EXPECT_LT(lo, 0.3);
  EXPECT_GT(hi, 0.3);
  auto [z0, z1] = wilson99(0, 1000);
  EXPECT_EQ(z0, 0.0);
  EXPECT_GT(z1, 0.0);
}

TEST(Coverage, ExactSweepMatchesGrid) {
  auto psi = ApproximatingFunction::power(1, 2, 0.5);
  auto inst = ProblemInstance::nonweighted(1, psi);
  auto est = coverage_fraction({inst, 3, 40});
  EXPECT_EQ(est.half_width, 0.0);
  EXPECT_NEAR(est.value, grid_union(psi, 3, 40, 400000), 2e-4);
}

TEST(Coverage, HalfOverQCoversEverything) {
  auto inst = ProblemInstance::nonweighted(1, ApproximatingFunction::power(1, 1, 0.5));
  EXPECT_NEAR(coverage_fraction({inst, 1, 100}).value, 1.0, 1e-12);
}

TEST(Coverage, MonteCarloForHigherDimension) {
  auto inst = ProblemInstance::nonweighted(2, ApproximatingFunction::power(1, 1, 0.25));
  auto est = coverage_fraction({inst, 1, 8}, 20000, 5);
  EXPECT_GT(est.half_width, 0.0);
  EXPECT_GE(est.value, 0.0);
  EXPECT_LE(est.value, 1.0);
}

TEST(TailMoment, MatchesDirectSum) {
  auto inst = ProblemInstance::nonweighted(1, ApproximatingFunction::power(1, 2));
  double direct = 0;
  for (std::int64_t q = 201; q <= 20000; ++q) direct += 2.0 / (static_cast<double>(q) * q);
  EXPECT_NEAR(tail_first_moment(inst, 201, 20000), direct, 1e-14);
}

TEST(CostExponent, OneDimensionalJarnik) {
  auto inst = ProblemInstance::nonweighted(1, ApproximatingFunction::power(1, 2));
  auto ce = hausdorff_cost_exponent(inst, 16);
  ASSERT_TRUE(ce.value);
  EXPECT_NEAR(*ce.value, 2.0 / 3.0, 1e-3);
}

TEST(SurfaceFourier, OnAndOffTheLine) {
  LatticePoint q({1, 2});
  for (std::int64_t t : {0, 1, -2}) EXPECT_NEAR(surface_fourier(q, {t, 2 * t}).magnitude, std::sqrt(5.0), 1e-9);
  EXPECT_LT(surface_fourier(q, {1, 0}).magnitude, 1e-9);
  EXPECT_LT(surface_fourier(q, {3, -7}).magnitude, 1e-9);
}

TEST(SurfaceFourier, OneDimensionalAtoms) {
  // counting measure on {p/q}: coefficient q on multiples of q, 0 elsewhere
  LatticePoint q = LatticePoint::scalar(5);
  EXPECT_NEAR(surface_fourier(q, {10}).magnitude, 5.0, 1e-12);
  EXPECT_LT(surface_fourier(q, {3}).magnitude, 1e-12);
}

TEST(AtomicFourier, MarginalIdentityHolds) {
  auto mu = AtomicMeasure::uniform(2, {0.1, 0.7, 0.1, 0.2, 0.45, 0.9, 0.8, 0.3});
  auto id = marginal_fourier_identity(mu, 1, {3});
  EXPECT_LT(id.deviation, 1e-12);
  // direct: average of e^{-2πi·3x}
  std::complex<double> direct = 0;
  for (double x : {0.1, 0.1, 0.45, 0.8}) direct += std::polar(1.0, -2 * M_PI * 3 * x);
  direct /= 4.0;
  EXPECT_NEAR(std::abs(id.rhs), std::abs(direct), 1e-12);
}

TEST(MeasureBound, LebesgueIsTightUpToTwoToTheM) {
  auto mb = measure_bound_check(nullptr, LatticePoint::scalar(4), {0.1, 0.05});
  EXPECT_NEAR(mb.lhs, 0.2 * 0.1, 1e-12);
  EXPECT_NEAR(mb.ratio, 4.0, 1e-12);
}
