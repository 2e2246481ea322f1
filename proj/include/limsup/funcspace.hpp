#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"

namespace limsup {

inline constexpr double kInvE = 0.36787944117144233;  // e^{-1}
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Dimension functions

struct PowerDim {
  double s;
};
struct PowerLogDim {
  double s;
  double p;
};
struct TableDim {
  std::vector<std::pair<double, double>> points;  // (radius, value), radius ascending
};

class DimensionFunction {
 public:
  using Kind = std::variant<PowerDim, PowerLogDim, TableDim>;

  // r^s. Monotone everywhere, so any positive cap is accepted.
  static DimensionFunction power(double s, double cap = kInvE) {
    if (!(s > 0) || !std::isfinite(s)) throw DomainError("power: s must be positive");
    if (!(cap > 0)) throw DomainError("power: cap must be positive");
    return DimensionFunction(PowerDim{s}, cap);
  }

  // r^s log^p(1/r); cap <= e^{-1}, and cap <= e^{-p/s} when p > 0.
  static DimensionFunction power_log(double s, double p, double cap = kInvE) {
    if (!(s > 0) || !std::isfinite(s)) throw DomainError("power_log: s must be positive");
    if (!std::isfinite(p)) throw DomainError("power_log: p must be finite");
    double bound = kInvE;
    if (p > 0) bound = std::min(bound, std::exp(-p / s));
    if (!(cap > 0) || cap > bound * (1 + 1e-15))
      throw DomainError("power_log: cap exceeds the monotone range");
    return DimensionFunction(PowerLogDim{s, p}, std::min(cap, bound));
  }

  // Log-log linear interpolation; outside the breakpoints the end segments
  // are extended.
  static DimensionFunction table(std::vector<std::pair<double, double>> points, double cap = kInvE) {
    if (points.size() < 2) throw DomainError("table: need at least two breakpoints");
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto [r, v] = points[i];
      if (!(r > 0) || !(v > 0)) throw DomainError("table: radii and values must be positive");
      if (i > 0 && !(r > points[i - 1].first)) throw DomainError("table: radii must increase");
      if (i > 0 && v < points[i - 1].second) throw DomainError("table: values must not decrease");
    }
    if (!(cap > 0)) throw DomainError("table: cap must be positive");
    DimensionFunction f(TableDim{std::move(points)}, cap);
    double last = std::get<TableDim>(f.kind_).points.back().first;
    if (cap > last && f.slope(f.segments() - 1) < 0) throw DomainError("table: decreasing extension");
    if (f.slope(0) <= 0) throw DomainError("table: first segment must increase (limit 0 at 0)");
    return f;
  }

  double operator()(double r) const {
    if (!(r > 0) || r > cap_) {
      std::ostringstream os;
      os << "dimension function evaluated at r=" << r << " outside (0, " << cap_ << "]";
      throw DomainError(os.str());
    }
    return eval_unchecked(r);
  }

  // log f(r), computed without forming f(r) when possible.
  double log_eval(double r) const {
    if (!(r > 0) || r > cap_) throw DomainError("dimension function: r outside domain");
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, PowerDim>) {
            return k.s * std::log(r);
          } else if constexpr (std::is_same_v<K, PowerLogDim>) {
            return k.s * std::log(r) + k.p * std::log(std::log(1 / r));
          } else {
            return std::log(eval_unchecked(r));
          }
        },
        kind_);
  }

  double cap() const { return cap_; }
  const Kind& kind() const { return kind_; }
  bool is_power() const { return std::holds_alternative<PowerDim>(kind_); }
  bool is_power_log() const { return std::holds_alternative<PowerLogDim>(kind_); }
  bool is_table() const { return std::holds_alternative<TableDim>(kind_); }

  // Leading exponent s for analytic kinds.
  std::optional<double> exponent() const {
    if (auto* p = std::get_if<PowerDim>(&kind_)) return p->s;
    if (auto* p = std::get_if<PowerLogDim>(&kind_)) return p->s;
    return std::nullopt;
  }
  double log_power() const {
    if (auto* p = std::get_if<PowerLogDim>(&kind_)) return p->p;
    return 0.0;
  }

  std::string describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, PowerDim>)
            os << "Power{s=" << k.s << "}";
          else if constexpr (std::is_same_v<K, PowerLogDim>)
            os << "PowerLog{s=" << k.s << ",p=" << k.p << "}";
          else
            os << "Table{" << k.points.size() << " breakpoints}";
        },
        kind_);
    return os.str();
  }

  // Log-log slope of table segment i (table kind only).
  double slope(std::size_t i) const {
    const auto& pts = std::get<TableDim>(kind_).points;
    return (std::log(pts[i + 1].second) - std::log(pts[i].second)) /
           (std::log(pts[i + 1].first) - std::log(pts[i].first));
  }
  std::size_t segments() const { return std::get<TableDim>(kind_).points.size() - 1; }

 private:
  DimensionFunction(Kind k, double cap) : kind_(std::move(k)), cap_(cap) {}

  double eval_unchecked(double r) const {
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, PowerDim>) {
            return std::pow(r, k.s);
          } else if constexpr (std::is_same_v<K, PowerLogDim>) {
            return std::pow(r, k.s) * std::pow(std::log(1 / r), k.p);
          } else {
            const auto& pts = k.points;
            std::size_t seg = 0;
            if (r >= pts.back().first) {
              seg = pts.size() - 2;
            } else if (r > pts.front().first) {
              auto it = std::upper_bound(pts.begin(), pts.end(), r,
                                         [](double x, const auto& p) { return x < p.first; });
              seg = static_cast<std::size_t>(it - pts.begin()) - 1;
            }
            if (r == pts[seg].first) return pts[seg].second;
            if (r == pts[seg + 1].first) return pts[seg + 1].second;
            double lx = std::log(r), x0 = std::log(pts[seg].first);
            return std::exp(std::log(pts[seg].second) + slope(seg) * (lx - x0));
          }
        },
        kind_);
  }

  Kind kind_;
  double cap_;
};

// ---------------------------------------------------------------------------
// Order calculus

struct OrderRelation {
  enum class Verdict { f_precedes_s, f_strictly_precedes_s, s_precedes_f, s_strictly_precedes_f, neither };

  bool f_precedes_s = false;
  bool f_strictly_precedes_s = false;
  bool s_precedes_f = false;
  bool s_strictly_precedes_f = false;
  std::optional<std::pair<double, double>> witness;  // x < y violating the failed monotonicity

  // Strongest single label. The equality case (both non-strict) reports
  // f_precedes_s; callers needing both read the flags.
  Verdict verdict() const {
    if (f_strictly_precedes_s) return Verdict::f_strictly_precedes_s;
    if (s_strictly_precedes_f) return Verdict::s_strictly_precedes_f;
    if (f_precedes_s) return Verdict::f_precedes_s;
    if (s_precedes_f) return Verdict::s_precedes_f;
    return Verdict::neither;
  }

  std::string describe() const {
    std::string out;
    auto add = [&](bool b, const char* name) {
      if (!b) return;
      if (!out.empty()) out += ",";
      out += name;
    };
    add(f_strictly_precedes_s, "f_strictly_precedes_s");
    add(f_precedes_s, "f_precedes_s");
    add(s_strictly_precedes_f, "s_strictly_precedes_f");
    add(s_precedes_f, "s_precedes_f");
    return out.empty() ? "neither" : out;
  }
};

struct GridSpec {
  int points = 256;
  double r_min = 0.0;  // 0 selects a kind-dependent default
};

namespace detail {

inline double grid_top(const DimensionFunction& f) { return std::min(f.cap(), 1.0); }

inline double grid_bottom(const DimensionFunction& f, const GridSpec& g) {
  if (g.r_min > 0) return g.r_min;
  if (f.is_table()) {
    double first = std::get<TableDim>(f.kind()).points.front().first;
    return std::min(first, grid_top(f)) * 1e-3;
  }
  return grid_top(f) * 1e-12;
}

inline std::vector<double> geometric_grid(double lo, double hi, int points) {
  std::vector<double> r(points);
  double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i) r[i] = std::exp(a + (b - a) * i / (points - 1));
  r.back() = hi;
  return r;
}

}  // namespace detail

// Grid method: checks monotonicity of log f(r) - s log r on a geometric grid.
// Strictness is not decided here (flags left false).
inline OrderRelation compare_on_grid(const DimensionFunction& f, double s, GridSpec g = {}) {
  if (g.points < 200) throw DomainError("compare_on_grid: need at least 200 points");
  auto grid = detail::geometric_grid(detail::grid_bottom(f, g), detail::grid_top(f), g.points);
  std::vector<double> lr(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) lr[i] = f.log_eval(grid[i]) - s * std::log(grid[i]);
  OrderRelation rel;
  rel.f_precedes_s = true;
  rel.s_precedes_f = true;
  std::optional<std::pair<double, double>> up, down;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    double tol = 1e-12 * std::max(1.0, std::abs(lr[i]));
    if (lr[i + 1] > lr[i] + tol) {
      rel.f_precedes_s = false;
      if (!up) up = {grid[i], grid[i + 1]};
    }
    if (lr[i + 1] < lr[i] - tol) {
      rel.s_precedes_f = false;
      if (!down) down = {grid[i], grid[i + 1]};
    }
  }
  if (!rel.f_precedes_s && !rel.s_precedes_f) rel.witness = up;
  return rel;
}

// Decides f ⪯ s, f ≺ s, s ⪯ f, s ≺ f. Power is symbolic; PowerLog uses the
// sign of d/dr log(f(r)/r^s) = (s0 - s - p/log(1/r))/r on the domain;
// Table uses the grid method with the first-segment slope for the limit.
inline OrderRelation compare(const DimensionFunction& f, double s, GridSpec g = {}) {
  if (!(s >= 0)) throw DomainError("compare: s must be non-negative");
  constexpr double eps = 1e-12;
  OrderRelation rel;
  double top = detail::grid_top(f);
  if (auto* pw = std::get_if<PowerDim>(&f.kind())) {
    double ds = pw->s - s;
    bool eq = std::abs(ds) <= eps;
    rel.f_precedes_s = ds <= 0 || eq;
    rel.s_precedes_f = ds >= 0 || eq;
    rel.f_strictly_precedes_s = !eq && ds < 0;
    rel.s_strictly_precedes_f = !eq && ds > 0;
    if (!rel.f_precedes_s) rel.witness = std::make_pair(top / 4, top / 2);
    if (!rel.s_precedes_f && !rel.witness) rel.witness = std::make_pair(top / 4, top / 2);
    return rel;
  }
  if (auto* pl = std::get_if<PowerLogDim>(&f.kind())) {
    double ds = pl->s - s;
    double p = pl->p;
    double L0 = std::log(1 / f.cap());
    bool zero_ds = std::abs(ds) <= eps;
    if (zero_ds) ds = 0;
    rel.f_precedes_s = p >= 0 ? ds <= 0 : ds - p / L0 <= eps;
    rel.s_precedes_f = p <= 0 ? ds >= 0 : ds - p / L0 >= -eps;
    // limit of r^{ds} log^p(1/r) as r -> 0
    int limit = ds < 0 ? 1 : ds > 0 ? -1 : (p > 0 ? 1 : p < 0 ? -1 : 0);  // 1: inf, -1: zero
    rel.f_strictly_precedes_s = rel.f_precedes_s && limit == 1;
    rel.s_strictly_precedes_f = rel.s_precedes_f && limit == -1;
    if (!rel.f_precedes_s && !rel.s_precedes_f) rel.witness = compare_on_grid(f, s, g).witness;
    if (!rel.witness && (!rel.f_precedes_s || !rel.s_precedes_f)) {
      auto grid = compare_on_grid(f, s, g);
      rel.witness = grid.witness;
    }
    return rel;
  }
  rel = compare_on_grid(f, s, g);
  double s0 = f.slope(0);
  int limit = std::abs(s0 - s) <= eps ? 0 : (s0 < s ? 1 : -1);
  rel.f_strictly_precedes_s = rel.f_precedes_s && limit == 1;
  rel.s_strictly_precedes_f = rel.s_precedes_f && limit == -1;
  return rel;
}

// Largest k in [lo, hi] with k ⪯ f ⪯ k+1.
inline std::optional<int> integer_bracket(const DimensionFunction& f, int lo, int hi) {
  for (int k = hi; k >= lo; --k) {
    if (compare(f, k).s_precedes_f && compare(f, k + 1).f_precedes_s) return k;
  }
  return std::nullopt;
}

// The a in [1, d-1] with (d-a) ⪯ f ⪯ (d-a+1); smallest a when several hold.
inline std::optional<int> bracket(const DimensionFunction& f, int d) {
  if (d < 2) throw DomainError("bracket: d must be at least 2");
  auto k = integer_bracket(f, 1, d - 1);
  if (!k) return std::nullopt;
  return d - *k;
}

struct RegularityGrid {
  double r_min = 1e-12;
  int r_points = 200;
  int alpha_points = 64;
};

struct RatioBounds {
  double lo = kInf;
  double hi = 0;
  std::size_t samples = 0;
};

// min / max of f(αr) / (f(r) α^{nm}) over 1 < α < r^{-t}, αr < cap.
inline RatioBounds regularity_check(const DimensionFunction& f, int nm, double t, RegularityGrid grid = {}) {
  if (!(t > 0 && t < 1)) throw DomainError("regularity_check: t must lie in (0,1)");
  if (nm < 1) throw DomainError("regularity_check: nm must be positive");
  double top = std::min(f.cap(), 1.0);
  if (!(grid.r_min > 0 && grid.r_min < top)) throw DomainError("regularity_check: bad r_min");
  RatioBounds b;
  auto rs = detail::geometric_grid(grid.r_min, top, grid.r_points);
  for (double r : rs) {
    double amax = std::min(std::pow(r, -t), f.cap() / r);
    if (!(amax > 1)) continue;
    double lf = f.log_eval(r);
    double la = std::log(amax);
    for (int i = 1; i <= grid.alpha_points; ++i) {
      double alpha = std::exp(la * i / (grid.alpha_points + 1));
      double ar = alpha * r;
      if (!(ar < f.cap())) continue;
      double v = std::exp(f.log_eval(ar) - lf - nm * std::log(alpha));
      b.lo = std::min(b.lo, v);
      b.hi = std::max(b.hi, v);
      ++b.samples;
    }
  }
  if (b.samples == 0) throw DomainError("regularity_check: empty sample region");
  return b;
}

// ---------------------------------------------------------------------------
// Approximating functions

struct PowerApprox {
  double tau;
  double coeff;
};
struct PowerLogApprox {
  double tau;
  double p;
  double coeff;
};
struct ConstantApprox {
  double c;
};
struct TableApprox {
  std::vector<double> values;  // values[k-1] is the value at |q| = k
};
struct LatticeApprox {
  std::function<double(std::span<const std::int64_t>)> fn;
  std::string label;
};

// ψ : Z^n -> [0, ∞). PowerLog uses log_+ |q| = log max(|q|, e) so that the
// value is finite and positive on every shell; this changes finitely many
// values only.
class ApproximatingFunction {
 public:
  using Kind = std::variant<PowerApprox, PowerLogApprox, ConstantApprox, TableApprox, LatticeApprox>;

  static ApproximatingFunction power(int n, double tau, double coeff = 1.0) {
    if (!(tau >= 0) || !(coeff > 0)) throw DomainError("power approximating function: need tau >= 0, coeff > 0");
    return ApproximatingFunction(PowerApprox{tau, coeff}, n, true);
  }
  static ApproximatingFunction power_log(int n, double tau, double p, double coeff = 1.0) {
    if (!(tau >= 0) || !(coeff > 0) || !std::isfinite(p))
      throw DomainError("power_log approximating function: bad parameters");
    return ApproximatingFunction(PowerLogApprox{tau, p, coeff}, n, p <= 0 || p <= tau);
  }
  static ApproximatingFunction constant(int n, double c) {
    if (!(c >= 0)) throw DomainError("constant approximating function: c must be non-negative");
    return ApproximatingFunction(ConstantApprox{c}, n, true);
  }
  static ApproximatingFunction table(int n, std::vector<double> values) {
    if (values.empty()) throw DomainError("table approximating function: empty");
    bool mono = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] >= 0)) throw DomainError("table approximating function: negative value");
      if (i > 0 && values[i] > values[i - 1]) mono = false;
    }
    return ApproximatingFunction(TableApprox{std::move(values)}, n, mono);
  }
  static ApproximatingFunction lattice(int n, std::function<double(std::span<const std::int64_t>)> fn,
                                       std::string label, bool non_increasing = false) {
    return ApproximatingFunction(LatticeApprox{std::move(fn), std::move(label)}, n, non_increasing);
  }

  int n() const { return n_; }
  bool univariable() const { return !std::holds_alternative<LatticeApprox>(kind_); }
  bool non_increasing() const { return non_increasing_; }
  const Kind& kind() const { return kind_; }

  // Symbolic kinds: ψ ≍ |q|^{-tau} log^p |q|.
  std::optional<std::pair<double, double>> asymptotic() const {
    if (auto* k = std::get_if<PowerApprox>(&kind_)) return std::make_pair(k->tau, 0.0);
    if (auto* k = std::get_if<PowerLogApprox>(&kind_)) return std::make_pair(k->tau, k->p);
    if (std::holds_alternative<ConstantApprox>(kind_)) return std::make_pair(0.0, 0.0);
    return std::nullopt;
  }
  double coefficient() const {
    if (auto* k = std::get_if<PowerApprox>(&kind_)) return k->coeff;
    if (auto* k = std::get_if<PowerLogApprox>(&kind_)) return k->coeff;
    if (auto* k = std::get_if<ConstantApprox>(&kind_)) return k->c;
    return 1.0;
  }

  // Largest |q| the function can be evaluated at.
  std::int64_t max_norm() const {
    if (auto* k = std::get_if<TableApprox>(&kind_)) return static_cast<std::int64_t>(k->values.size());
    return std::numeric_limits<std::int64_t>::max();
  }

  double at_norm(std::int64_t q) const {
    if (q < 1) throw DomainError("approximating function: |q| must be positive");
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          double x = static_cast<double>(q);
          if constexpr (std::is_same_v<K, PowerApprox>) {
            return k.coeff * std::pow(x, -k.tau);
          } else if constexpr (std::is_same_v<K, PowerLogApprox>) {
            return k.coeff * std::pow(x, -k.tau) * std::pow(std::log(std::max(x, std::exp(1.0))), k.p);
          } else if constexpr (std::is_same_v<K, ConstantApprox>) {
            return k.c;
          } else if constexpr (std::is_same_v<K, TableApprox>) {
            if (q > static_cast<std::int64_t>(k.values.size()))
              throw DomainError("table approximating function: |q| beyond table");
            return k.values[q - 1];
          } else {
            throw DomainError("lattice approximating function has no norm form");
          }
        },
        kind_);
  }

  double operator()(std::span<const std::int64_t> q) const {
    if (auto* k = std::get_if<LatticeApprox>(&kind_)) {
      double v = k->fn(q);
      if (!(v >= 0)) throw DomainError("approximating function returned a negative value");
      return v;
    }
    std::int64_t s = 0;
    for (auto c : q) s = std::max<std::int64_t>(s, std::llabs(c));
    return at_norm(s);
  }
  double operator()(const LatticePoint& q) const { return (*this)(std::span<const std::int64_t>(q.coords)); }

  std::string describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, PowerApprox>)
            os << k.coeff << "*|q|^-" << k.tau;
          else if constexpr (std::is_same_v<K, PowerLogApprox>)
            os << k.coeff << "*|q|^-" << k.tau << "*log^" << k.p << "|q|";
          else if constexpr (std::is_same_v<K, ConstantApprox>)
            os << k.c;
          else if constexpr (std::is_same_v<K, TableApprox>)
            os << "table[" << k.values.size() << "]";
          else
            os << k.label;
        },
        kind_);
    return os.str();
  }

 private:
  ApproximatingFunction(Kind k, int n, bool mono) : kind_(std::move(k)), n_(n), non_increasing_(mono) {
    if (n < 1) throw DomainError("approximating function: n must be positive");
  }

  Kind kind_;
  int n_;
  bool non_increasing_;
};

// Checks ψ(q) >= ψ(q') along coordinate-wise chains |q_l| <= |q'_l| from
// every point of the shells up to qmax (unit steps in each coordinate).
inline bool check_non_increasing(const ApproximatingFunction& psi, std::int64_t qmax) {
  int n = psi.n();
  for (std::int64_t q = 1; q < qmax; ++q) {
    bool ok = true;
    for_each_shell_point(n, q, [&](std::span<const std::int64_t> c) {
      if (!ok) return;
      double v = psi(c);
      std::vector<std::int64_t> next(c.begin(), c.end());
      for (int l = 0; l < n; ++l) {
        next[l] += next[l] >= 0 ? 1 : -1;
        if (psi(std::span<const std::int64_t>(next)) > v * (1 + 1e-12)) ok = false;
        next[l] = c[l];
      }
    });
    if (!ok) return false;
  }
  return true;
}

class WeightSystem {
 public:
  WeightSystem() = default;
  explicit WeightSystem(std::vector<ApproximatingFunction> comps) : comps_(std::move(comps)) {
    if (comps_.empty()) throw DomainError("WeightSystem: m must be at least 1");
    for (const auto& c : comps_)
      if (c.n() != comps_.front().n()) throw DomainError("WeightSystem: components must share n");
  }
  static WeightSystem repeated(const ApproximatingFunction& psi, int m) {
    return WeightSystem(std::vector<ApproximatingFunction>(m, psi));
  }

  int m() const { return static_cast<int>(comps_.size()); }
  int n() const { return comps_.front().n(); }
  const ApproximatingFunction& operator[](int j) const { return comps_[j]; }
  const std::vector<ApproximatingFunction>& components() const { return comps_; }

  bool univariable() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const auto& c) { return c.univariable(); });
  }
  bool non_increasing() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const auto& c) { return c.non_increasing(); });
  }
  bool symbolic() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const auto& c) { return c.asymptotic().has_value(); });
  }
  std::int64_t max_norm() const {
    std::int64_t q = std::numeric_limits<std::int64_t>::max();
    for (const auto& c : comps_) q = std::min(q, c.max_norm());
    return q;
  }

  std::vector<double> values(std::span<const std::int64_t> q) const {
    std::vector<double> v(comps_.size());
    for (std::size_t j = 0; j < comps_.size(); ++j) v[j] = comps_[j](q);
    return v;
  }
  std::vector<double> values_at_norm(std::int64_t q) const {
    std::vector<double> v(comps_.size());
    for (std::size_t j = 0; j < comps_.size(); ++j) v[j] = comps_[j].at_norm(q);
    return v;
  }

 private:
  std::vector<ApproximatingFunction> comps_;
};

// S_q = Σ_{|q|=q} ∏ψ_j(q).
inline double shell_product_sum(const WeightSystem& ws, std::int64_t q) {
  if (ws.univariable()) {
    double prod = 1;
    for (double v : ws.values_at_norm(q)) prod *= v;
    return shell_count(ws.n(), q) * prod;
  }
  double s = 0;
  for_each_shell_point(ws.n(), q, [&](std::span<const std::int64_t> c) {
    double prod = 1;
    for (double v : ws.values(c)) prod *= v;
    s += prod;
  });
  return s;
}

struct NearMonotone {
  double c = 0;
  bool degenerate = false;
  std::int64_t q1 = 0, q2 = 0;  // pair attaining the minimum
};

// min over q1 < q2 <= qmax of (q1^α S_{q1}) / (q2^α S_{q2}).
inline NearMonotone near_monotone_constant(const WeightSystem& ws, double alpha, std::int64_t qmax) {
  if (qmax < 2) throw DomainError("near_monotone_constant: qmax must be at least 2");
  std::vector<double> v(qmax + 1, 0);
  NearMonotone out;
  for (std::int64_t q = 1; q <= qmax; ++q) {
    v[q] = std::pow(static_cast<double>(q), alpha) * shell_product_sum(ws, q);
    if (!(v[q] > 0)) out.degenerate = true;
  }
  if (out.degenerate) return out;
  // suffix maxima of v over q2 > q1
  std::vector<double> best(qmax + 2, 0);
  std::vector<std::int64_t> arg(qmax + 2, 0);
  for (std::int64_t q = qmax; q >= 1; --q) {
    if (v[q] >= best[q + 1]) {
      best[q] = v[q];
      arg[q] = q;
    } else {
      best[q] = best[q + 1];
      arg[q] = arg[q + 1];
    }
  }
  out.c = kInf;
  for (std::int64_t q1 = 1; q1 < qmax; ++q1) {
    double r = v[q1] / best[q1 + 1];
    if (r < out.c) {
      out.c = r;
      out.q1 = q1;
      out.q2 = arg[q1 + 1];
    }
  }
  return out;
}

}  // namespace limsup
