#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "funcspace.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace limsup {

// Axis-parallel box, sides kept in descending order.
class Rect {
 public:
  Rect() = default;
  explicit Rect(std::vector<double> sides) : sides_(std::move(sides)) {
    if (sides_.empty()) throw DomainError("Rect: need at least one side");
    for (double a : sides_)
      if (!(a > 0) || a > 1) throw DomainError("Rect: sides must lie in (0, 1]");
    std::sort(sides_.begin(), sides_.end(), std::greater<>());
  }
  int dim() const { return static_cast<int>(sides_.size()); }
  double operator[](int i) const { return sides_[i]; }
  const std::vector<double>& sides() const { return sides_; }
  double volume() const {
    double v = 1;
    for (double a : sides_) v *= a;
    return v;
  }

 private:
  std::vector<double> sides_;
};

struct ContentEstimate {
  double formula_value = 0;
  int bracket_k = -1;  // k with k ⪯ f ⪯ k+1
  int min_index = -1;  // independent argmin
  std::optional<double> cover_upper;
  std::optional<double> mdp_lower;
};

namespace detail {

// log of a_1⋯a_i · a_{i+1}^{-i} · f(a_{i+1}), or nullopt outside f's domain.
inline std::optional<double> content_term_log(const Rect& r, const DimensionFunction& f, int i) {
  double a = r[i];
  if (a > f.cap()) return std::nullopt;
  double s = 0;
  for (int j = 0; j < i; ++j) s += std::log(r[j]);
  return s - i * std::log(a) + f.log_eval(a);
}

}  // namespace detail

// Independent argmin over i of the singular-value style products.
// Ties within 1e-12 relative go to the smallest index.
inline std::pair<int, double> content_argmin(const Rect& r, const DimensionFunction& f) {
  int best = -1;
  double best_log = kInf;
  for (int i = 0; i < r.dim(); ++i) {
    auto t = detail::content_term_log(r, f, i);
    if (!t) continue;
    if (best < 0 || *t < best_log - 1e-12) {
      best = i;
      best_log = *t;
    }
  }
  if (best < 0) throw Inapplicable("content_argmin: f not defined at any side length");
  return {best, std::exp(best_log)};
}

inline ContentEstimate rect_content_formula(const Rect& r, const DimensionFunction& f) {
  int d = r.dim();
  auto k = integer_bracket(f, 0, d - 1);
  if (!k) throw Inapplicable("rect_content_formula: no k in [0, d-1] with k ⪯ f ⪯ k+1");
  auto t = detail::content_term_log(r, f, *k);
  if (!t) throw Inapplicable("rect_content_formula: side outside the domain of f");
  ContentEstimate out;
  out.bracket_k = *k;
  out.formula_value = std::exp(*t);
  out.min_index = content_argmin(r, f).first;
  return out;
}

// Tiles the box by cells whose longest side is a_i and charges each cell
// f(diagonal); the cheapest i is an upper bound for the f-content.
inline double greedy_cover_oracle(const Rect& r, const DimensionFunction& f) {
  int d = r.dim();
  if (d > 5) throw DomainError("greedy_cover_oracle: d <= 5 only");
  double best = kInf;
  for (int i = 0; i < d; ++i) {
    double ai = r[i];
    double count = 1, diag2 = 0;
    for (int j = 0; j < d; ++j) {
      if (j < i) {
        double c = std::ceil(r[j] / ai * (1 - 1e-14));
        count *= c;
        double side = r[j] / c;
        diag2 += side * side;
      } else {
        diag2 += r[j] * r[j];
      }
    }
    double diag = std::sqrt(diag2);
    if (diag > f.cap()) continue;
    best = std::min(best, count * f(diag));
  }
  if (!std::isfinite(best)) throw Inapplicable("greedy_cover_oracle: no cover within the domain of f");
  return best;
}

// ---------------------------------------------------------------------------
// Measures for the mass distribution check

// Uniform measure on a box, discretized by a product grid of midpoints.
// Ball masses factor over the axes, so counting is per-axis.
class ProductGridMeasure {
 public:
  explicit ProductGridMeasure(const Rect& r, int base_points = 64) : rect_(r) {
    double smallest = r[r.dim() - 1];
    for (int j = 0; j < r.dim(); ++j) {
      auto g = static_cast<std::int64_t>(std::ceil(base_points * r[j] / smallest - 1e-9));
      points_.push_back(std::max<std::int64_t>(g, 1));
    }
  }
  int dim() const { return rect_.dim(); }
  double spacing(int j) const { return rect_[j] / static_cast<double>(points_[j]); }
  double resolution() const {
    double s = 0;
    for (int j = 0; j < dim(); ++j) s = std::max(s, spacing(j));
    return 10 * s;
  }
  double extent() const { return rect_[0]; }

  // mass of the closed sup-norm ball
  double mass(const std::vector<double>& c, double radius) const {
    double m = 1;
    for (int j = 0; j < dim(); ++j) {
      double h = spacing(j);
      // midpoints (i + 1/2) h, i in [0, g)
      double lo = (c[j] - radius) / h - 0.5, hi = (c[j] + radius) / h - 0.5;
      auto ilo = static_cast<std::int64_t>(std::ceil(lo - 1e-12));
      auto ihi = static_cast<std::int64_t>(std::floor(hi + 1e-12));
      ilo = std::max<std::int64_t>(ilo, 0);
      ihi = std::min<std::int64_t>(ihi, points_[j] - 1);
      if (ihi < ilo) return 0;
      m *= static_cast<double>(ihi - ilo + 1) / static_cast<double>(points_[j]);
    }
    return m;
  }

  std::vector<double> sample_atom(CounterRng& rng) const {
    std::vector<double> c(dim());
    for (int j = 0; j < dim(); ++j)
      c[j] = (static_cast<double>(rng.below(points_[j])) + 0.5) * spacing(j);
    return c;
  }

  // center balls with radii a_j/2 and a_j
  std::vector<std::pair<std::vector<double>, double>> anchor_balls() const {
    std::vector<double> center(dim());
    for (int j = 0; j < dim(); ++j) center[j] = rect_[j] / 2;
    std::vector<std::pair<std::vector<double>, double>> out;
    for (int j = 0; j < dim(); ++j) {
      out.push_back({center, rect_[j] / 2});
      out.push_back({center, rect_[j]});
    }
    return out;
  }

 private:
  Rect rect_;
  std::vector<std::int64_t> points_;
};

// Normalized atomic measure in [0,1]^d; ball masses by brute force.
class AtomicMeasure {
 public:
  AtomicMeasure(int dim, std::vector<double> coords, std::vector<double> weights)
      : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
    if (dim < 1) throw DomainError("AtomicMeasure: dim must be positive");
    if (coords_.size() != weights_.size() * static_cast<std::size_t>(dim))
      throw DomainError("AtomicMeasure: coordinate count mismatch");
    if (weights_.empty()) throw DomainError("AtomicMeasure: no atoms");
    double total = 0;
    for (double w : weights_) {
      if (!(w > 0)) throw DomainError("AtomicMeasure: weights must be positive");
      total += w;
    }
    for (double& w : weights_) w /= total;
  }
  static AtomicMeasure uniform(int dim, std::vector<double> coords) {
    std::size_t n = coords.size() / static_cast<std::size_t>(dim);
    return AtomicMeasure(dim, std::move(coords), std::vector<double>(n, 1.0));
  }

  int dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  const double* atom(std::size_t i) const { return coords_.data() + i * dim_; }
  double resolution() const { return 10.0 / std::pow(static_cast<double>(size()), 1.0 / dim_); }
  double extent() const { return 1.0; }

  double mass(const std::vector<double>& c, double radius) const {
    double m = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      const double* a = atom(i);
      bool in = true;
      for (int j = 0; j < dim_ && in; ++j) in = std::abs(a[j] - c[j]) <= radius;
      if (in) m += weights_[i];
    }
    return m;
  }

  std::vector<double> sample_atom(CounterRng& rng) const {
    const double* a = atom(rng.below(size()));
    return std::vector<double>(a, a + dim_);
  }

  std::vector<std::pair<std::vector<double>, double>> anchor_balls() const { return {}; }

 private:
  int dim_;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

struct BallSpec {
  int count = 2000;
  std::uint64_t seed = 1;
  double floor = 0;  // 0 selects the measure's resolution floor
  double r_max = 0;  // 0 selects the measure's extent
};

struct MdpResult {
  double lower = 0;  // 1/c
  double c = 0;
  std::size_t balls_used = 0;
  std::size_t excluded = 0;  // below resolution or outside the domain of f
};

// c = max μ(B)/f(radius B) over sampled closed sup-norm balls; 1/c is the
// empirical content lower bound.
template <class Measure>
MdpResult mdp_check(const Measure& mu, const DimensionFunction& f, const BallSpec& spec = {}) {
  double floor = spec.floor > 0 ? spec.floor : mu.resolution();
  double rmax = spec.r_max > 0 ? spec.r_max : mu.extent();
  struct Ball {
    double ratio = 0;
    int state = 0;  // 0 used, 1 excluded
  };
  auto eval = [&](const std::vector<double>& c, double radius) {
    Ball b;
    if (radius < floor || radius > f.cap()) {
      b.state = 1;
      return b;
    }
    b.ratio = mu.mass(c, radius) / f(radius);
    return b;
  };
  auto anchors = mu.anchor_balls();
  std::vector<Ball> results;
  for (auto& [c, radius] : anchors) results.push_back(eval(c, radius));
  auto random = parallel_map(static_cast<std::size_t>(std::max(spec.count, 0)), [&](std::size_t i) {
    CounterRng rng(spec.seed, i);
    auto c = mu.sample_atom(rng);
    double radius = floor < rmax ? rng.log_uniform(floor, rmax) : floor;
    return eval(c, radius);
  });
  results.insert(results.end(), random.begin(), random.end());
  MdpResult out;
  for (const auto& b : results) {
    if (b.state == 1) {
      ++out.excluded;
      continue;
    }
    ++out.balls_used;
    out.c = std::max(out.c, b.ratio);
  }
  out.lower = out.c > 0 ? 1 / out.c : kInf;
  return out;
}

inline ContentEstimate content_estimate(const Rect& r, const DimensionFunction& f, const BallSpec& spec = {}) {
  auto est = rect_content_formula(r, f);
  est.cover_upper = greedy_cover_oracle(r, f);
  est.mdp_lower = mdp_check(ProductGridMeasure(r), f, spec).lower;
  return est;
}

// Hypothesis of the balls-to-rectangles transference step:
// f-content of the inner box exceeds c times the ball's Lebesgue measure.
inline bool mtp_hypothesis_check(double ball_measure, const Rect& inner, const DimensionFunction& f, double c) {
  if (!(ball_measure > 0) || !(c > 0)) throw DomainError("mtp_hypothesis_check: need positive ball measure and c");
  return rect_content_formula(inner, f).formula_value > c * ball_measure;
}

}  // namespace limsup
