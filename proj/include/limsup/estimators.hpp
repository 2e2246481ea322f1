#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "content.hpp"
#include "criteria.hpp"
#include "errors.hpp"
#include "funcspace.hpp"
#include "instance.hpp"
#include "lattice.hpp"
#include "parallel.hpp"
#include "resonant.hpp"
#include "rng.hpp"

namespace limsup {

// value ± half_width; half_width is 0 for exact methods.
struct Estimate {
  double value = 0;
  double half_width = 0;
  std::string method;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
};

// Wilson score interval at 99% for a binomial proportion.
inline std::pair<double, double> wilson99(std::size_t hits, std::size_t n) {
  constexpr double z = 2.5758293035489004;
  if (n == 0) return {0, 1};
  double N = static_cast<double>(n), p = static_cast<double>(hits) / N;
  double den = 1 + z * z / N;
  double c = (p + z * z / (2 * N)) / den;
  double h = z * std::sqrt(p * (1 - p) / N + z * z / (4 * N * N)) / den;
  return {std::max(0.0, c - h), std::min(1.0, c + h)};
}

// ---------------------------------------------------------------------------
// Finite stages ∪_{Qlo ≤ |q| ≤ Qhi} R(q, Ψ(q))

struct StageUnion {
  ProblemInstance instance;
  std::int64_t qlo = 1;
  std::int64_t qhi = 1;
};

namespace detail {

// δ attached to the pair {q, -q}: the union R(q,Ψ(q)) ∪ R(q,Ψ(-q)) for n = m = 1.
inline double pair_delta_1d(const ProblemInstance& inst, std::int64_t q) {
  std::int64_t a[1] = {q}, b[1] = {-q};
  const auto& psi = inst.psi[0];
  return std::max(psi(std::span<const std::int64_t>(a, 1)), psi(std::span<const std::int64_t>(b, 1)));
}

// Exact measure of ∪_q {x ∈ [0,1] : ‖qx‖ < δ_q}; [0,1] is cut into bins and
// each bin's intervals are sorted and merged independently.
inline double union_measure_1d(std::int64_t qlo, const std::vector<double>& deltas, int bins = 2048) {
  auto per_bin = parallel_map(static_cast<std::size_t>(bins), [&](std::size_t b) {
    double a = static_cast<double>(b) / bins, c = static_cast<double>(b + 1) / bins;
    std::vector<std::pair<double, double>> parts;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      double d = deltas[i];
      if (!(d > 0)) continue;
      if (d > 0.5) return c - a;
      double q = static_cast<double>(qlo + static_cast<std::int64_t>(i));
      auto plo = static_cast<std::int64_t>(std::ceil(q * a - d));
      auto phi = static_cast<std::int64_t>(std::floor(q * c + d));
      for (std::int64_t p = plo; p <= phi; ++p) {
        double lo = std::max((static_cast<double>(p) - d) / q, a);
        double hi = std::min((static_cast<double>(p) + d) / q, c);
        if (hi > lo) parts.push_back({lo, hi});
      }
    }
    // bucket by left endpoint, then sort each bucket
    std::size_t nb = std::max<std::size_t>(1, parts.size() / 8);
    std::vector<std::uint32_t> start(nb + 1, 0);
    auto bucket = [&](double lo) {
      auto k = static_cast<std::size_t>((lo - a) / (c - a) * static_cast<double>(nb));
      return std::min(k, nb - 1);
    };
    for (const auto& p : parts) ++start[bucket(p.first) + 1];
    for (std::size_t k = 0; k < nb; ++k) start[k + 1] += start[k];
    std::vector<std::pair<double, double>> sorted(parts.size());
    {
      auto pos = start;
      for (const auto& p : parts) sorted[pos[bucket(p.first)]++] = p;
    }
    for (std::size_t k = 0; k < nb; ++k) std::sort(sorted.begin() + start[k], sorted.begin() + start[k + 1]);
    parts.swap(sorted);
    double total = 0, cur_lo = 0, cur_hi = -1;
    for (const auto& [lo, hi] : parts) {
      if (lo > cur_hi) {
        if (cur_hi > cur_lo) total += cur_hi - cur_lo;
        cur_lo = lo;
        cur_hi = hi;
      } else {
        cur_hi = std::max(cur_hi, hi);
      }
    }
    if (cur_hi > cur_lo) total += cur_hi - cur_lo;
    return total;
  });
  double s = 0;
  for (double v : per_bin) s += v;
  return std::min(s, 1.0);
}

inline bool stage_member(std::span<const double> x, const ProblemInstance& inst, const WeightSystem& ws,
                         std::int64_t qlo, std::int64_t qhi) {
  int n = inst.n, m = inst.m;
  bool hit = false;
  for (std::int64_t q = qlo; q <= qhi && !hit; ++q) {
    for_each_shell_point(n, q, [&](std::span<const std::int64_t> c) {
      if (hit) return;
      std::vector<double> u(m);
      for (int j = 0; j < m; ++j) {
        double y = 0;
        for (int i = 0; i < n; ++i) y += static_cast<double>(c[i]) * x[j * n + i];
        u[j] = dist_to_int(y);
      }
      if (inst.mode == Mode::multiplicative) {
        double p = 1;
        for (double v : u) p *= v;
        hit = p < ws[0](c);
      } else {
        auto d = ws.values(c);
        bool in = true;
        for (int j = 0; j < m && in; ++j) in = u[j] < d[j];
        hit = in;
      }
    });
  }
  return hit;
}

}  // namespace detail

inline Estimate coverage_fraction(const StageUnion& stage, std::size_t samples = 1000000, std::uint64_t seed = 1) {
  Estimate e;
  e.seed = seed;
  const auto& inst = stage.instance;
  std::int64_t qlo = std::max<std::int64_t>(stage.qlo, 1);
  if (qlo > stage.qhi) {
    e.method = "empty";
    return e;
  }
  if (inst.n == 1 && inst.m == 1) {
    std::vector<double> deltas;
    for (std::int64_t q = qlo; q <= stage.qhi; ++q) deltas.push_back(detail::pair_delta_1d(inst, q));
    e.value = detail::union_measure_1d(qlo, deltas);
    e.method = "exact-sweep";
    e.budget = deltas.size();
    return e;
  }
  if (samples == 0) throw DomainError("coverage_fraction: need samples");
  auto ws = inst.psi_system();
  std::size_t dim = static_cast<std::size_t>(inst.d());
  double hits = parallel_sum(samples, [&](std::size_t i) {
    CounterRng rng(seed, i);
    std::vector<double> x(dim);
    for (auto& v : x) v = rng.uniform();
    return detail::stage_member(x, inst, ws, qlo, stage.qhi) ? 1.0 : 0.0;
  });
  auto h = static_cast<std::size_t>(hits);
  auto [lo, hi] = wilson99(h, samples);
  e.value = static_cast<double>(h) / static_cast<double>(samples);
  e.half_width = (hi - lo) / 2;
  e.method = "monte-carlo";
  e.budget = samples;
  return e;
}

// Σ over pairs {q, -q} with Qlo ≤ |q| ≤ Qhi of the measure of
// R(q,Ψ(q)) ∪ R(-q,Ψ(-q)); both sets live on the same hyperplanes.
inline double tail_first_moment(const ProblemInstance& inst, std::int64_t qlo, std::int64_t qhi) {
  qlo = std::max<std::int64_t>(qlo, 1);
  if (qlo > qhi) return 0;
  auto ws = inst.psi_system();
  int n = inst.n, m = inst.m;
  bool mult = inst.mode == Mode::multiplicative;
  auto rect = [&](const std::vector<double>& d) {
    double p = 1;
    for (double v : d) p *= std::min(2 * v, 1.0);
    return p;
  };
  auto pair_measure = [&](std::span<const std::int64_t> q) {
    std::vector<std::int64_t> neg(q.begin(), q.end());
    for (auto& c : neg) c = -c;
    if (mult) {
      double d = std::max(ws[0](q), ws[0](std::span<const std::int64_t>(neg)));
      return v_m(m, std::ldexp(d, m));
    }
    auto a = ws.values(q), b = ws.values(std::span<const std::int64_t>(neg));
    std::vector<double> lo(m);
    for (int j = 0; j < m; ++j) lo[j] = std::min(a[j], b[j]);
    return rect(a) + rect(b) - rect(lo);
  };
  std::size_t count = static_cast<std::size_t>(qhi - qlo + 1);
  if (ws.univariable()) {
    return parallel_sum(count, [&](std::size_t i) {
      std::int64_t q = qlo + static_cast<std::int64_t>(i);
      std::vector<std::int64_t> rep(n, 0);
      rep[0] = q;
      return shell_count(n, q) / 2 * pair_measure(rep);
    });
  }
  return parallel_sum(count, [&](std::size_t i) {
    std::int64_t q = qlo + static_cast<std::int64_t>(i);
    double s = 0;
    for_each_shell_point(n, q, [&](std::span<const std::int64_t> c) {
      // one representative per pair: first non-zero coordinate positive
      for (auto v : c) {
        if (v == 0) continue;
        if (v > 0) s += pair_measure(c);
        break;
      }
    });
    return s;
  });
}

// ---------------------------------------------------------------------------
// Natural-cover cost exponent

struct CostExponent {
  std::optional<double> value;
  double lo = 0, hi = 0;  // window searched
  int kmax = 0;
  std::string method;
};

// s where the block growth of Σ t_q(Ψ, r^s)|q|^m crosses zero, by bisection
// in the window (nm-1, nm).
inline CostExponent hausdorff_cost_exponent(const ProblemInstance& inst, int kmax = 16, double tol = 1e-3) {
  if (inst.mode == Mode::multiplicative) throw DomainError("hausdorff_cost_exponent: weighted or nonweighted only");
  auto ws = inst.psi_system();
  int n = inst.n, m = inst.m, nm = n * m;
  CostExponent out;
  out.lo = nm - 1;
  out.hi = nm;
  out.kmax = kmax;
  out.method = "block-growth bisection";
  auto slope = [&](double s) -> std::optional<double> {
    auto f = DimensionFunction::power(s, kInf);
    auto blocks = dyadic_block_sums(n, ws.univariable(), kmax,
                                    [&](std::span<const std::int64_t> q, std::int64_t qn) -> std::optional<double> {
                                      auto v = ws.values(q);
                                      for (double x : v)
                                        if (!(x > 0)) return std::nullopt;
                                      return std::exp(t_q(v, n, qn, f).log_value + m * std::log(static_cast<double>(qn)));
                                    });
    auto fit = fit_growth(blocks);
    if (!fit) return std::nullopt;
    return fit->slope;
  };
  double lo = out.lo + 1e-9, hi = out.hi - 1e-9;
  auto slo = slope(lo), shi = slope(hi);
  if (!slo || !shi || !(*slo > 0) || !(*shi < 0)) {
    out.method = "no crossing in window";
    return out;
  }
  while (hi - lo > tol / 8) {
    double mid = (lo + hi) / 2;
    auto sm = slope(mid);
    if (!sm) return out;
    (*sm > 0 ? lo : hi) = mid;
  }
  out.value = (lo + hi) / 2;
  return out;
}

// ---------------------------------------------------------------------------
// Fourier transform of the surface measure on {x ∈ [0,1]^n : q·x ∈ Z}

struct SurfaceFourier {
  double magnitude = 0;
  std::complex<double> value;
  double error_estimate = 0;
  bool flagged = false;
};

inline SurfaceFourier surface_fourier(const LatticePoint& q, const std::vector<std::int64_t>& k, int panels = 16,
                                      double tol = 1e-9) {
  int n = q.dim();
  if (static_cast<int>(k.size()) != n) throw DomainError("surface_fourier: frequency arity differs from q");
  if (q.sup_norm() == 0) throw DomainError("surface_fourier: q must be non-zero");
  if (panels < 1) throw DomainError("surface_fourier: need at least one panel");
  constexpr double two_pi = 2 * std::numbers::pi;
  SurfaceFourier out;
  if (n == 1) {
    // unit atoms at p/q, p = 0..|q|-1
    std::int64_t Q = std::llabs(q.coords[0]);
    std::complex<double> s = 0;
    for (std::int64_t p = 0; p < Q; ++p) {
      double ph = -two_pi * static_cast<double>((k[0] * p) % Q) / static_cast<double>(Q);
      s += std::polar(1.0, ph);
    }
    out.value = s;
    out.magnitude = std::abs(s);
    return out;
  }
  if (n != 2) throw DomainError("surface_fourier: only n <= 2 is supported");
  double a = static_cast<double>(q.coords[0]), b = static_cast<double>(q.coords[1]);
  double k0 = static_cast<double>(k[0]), k1 = static_cast<double>(k[1]);
  // segments a x + b y = t inside the unit square
  auto segment = [&](double t) -> std::optional<std::pair<std::array<double, 2>, std::array<double, 2>>> {
    std::vector<std::array<double, 2>> pts;
    auto add = [&](double x, double y) {
      if (x < -1e-12 || x > 1 + 1e-12 || y < -1e-12 || y > 1 + 1e-12) return;
      x = std::clamp(x, 0.0, 1.0);
      y = std::clamp(y, 0.0, 1.0);
      for (auto& p : pts)
        if (std::abs(p[0] - x) < 1e-12 && std::abs(p[1] - y) < 1e-12) return;
      pts.push_back({x, y});
    };
    if (b != 0) {
      add(0, t / b);
      add(1, (t - a) / b);
    }
    if (a != 0) {
      add(t / a, 0);
      add((t - b) / a, 1);
    }
    if (pts.size() < 2) return std::nullopt;
    std::sort(pts.begin(), pts.end());
    return std::make_pair(pts.front(), pts.back());
  };
  auto integrate = [&](int np) {
    std::complex<double> total = 0;
    double tmin = std::min(0.0, a) + std::min(0.0, b), tmax = std::max(0.0, a) + std::max(0.0, b);
    for (auto t = static_cast<std::int64_t>(std::ceil(tmin)); t <= static_cast<std::int64_t>(std::floor(tmax)); ++t) {
      auto seg = segment(static_cast<double>(t));
      if (!seg) continue;
      auto [P, R] = *seg;
      double dx = R[0] - P[0], dy = R[1] - P[1];
      double len = std::hypot(dx, dy);
      if (len < 1e-15) continue;
      for (int i = 0; i < np; ++i) {
        double u0 = static_cast<double>(i) / np, u1 = static_cast<double>(i + 1) / np;
        auto phase = [&](double u) { return -two_pi * (k0 * (P[0] + u * dx) + k1 * (P[1] + u * dy)); };
        double re = boost::math::quadrature::gauss<double, 20>::integrate(
            [&](double u) { return std::cos(phase(u)); }, u0, u1);
        double im = boost::math::quadrature::gauss<double, 20>::integrate(
            [&](double u) { return std::sin(phase(u)); }, u0, u1);
        total += len * std::complex<double>(re, im);
      }
    }
    return total;
  };
  out.value = integrate(panels);
  auto coarse = integrate(std::max(1, panels / 2));
  out.error_estimate = std::abs(out.value - coarse);
  out.flagged = out.error_estimate > tol;
  out.magnitude = std::abs(out.value);
  return out;
}

// ---------------------------------------------------------------------------
// Measure bounds through Fourier coefficients

// μ̂(ξ) = Σ_a w_a e^{-2πi ξ·x_a} for an atomic measure.
inline std::complex<double> atomic_fourier(const AtomicMeasure& mu, std::span<const std::int64_t> xi) {
  constexpr double two_pi = 2 * std::numbers::pi;
  if (static_cast<int>(xi.size()) != mu.dim()) throw DomainError("atomic_fourier: frequency arity differs");
  std::complex<double> s = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double* a = mu.atom(i);
    double ph = 0;
    for (int j = 0; j < mu.dim(); ++j) ph += static_cast<double>(xi[j]) * a[j];
    ph -= std::floor(ph);
    s += mu.weight(i) * std::polar(1.0, -two_pi * ph);
  }
  return s;
}

struct MeasureBound {
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  std::optional<double> rhs_decay;  // closed form under an assumed decay exponent
  bool unreliable = false;
};

namespace detail {

// Σ_{t≠0, |t_j| ≤ B_j} |μ̂(t_1 q, …, t_m q)|, using y_{a,j} = q·x_{a,j}.
inline double fourier_box_sum(const AtomicMeasure& mu, const LatticePoint& q, const std::vector<std::int64_t>& B) {
  constexpr double two_pi = 2 * std::numbers::pi;
  int n = q.dim(), m = static_cast<int>(B.size());
  std::vector<double> y(mu.size() * m);
  for (std::size_t a = 0; a < mu.size(); ++a)
    for (int j = 0; j < m; ++j) y[a * m + j] = q.dot(std::span<const double>(mu.atom(a) + j * n, n));
  std::size_t cells = 1;
  for (auto b : B) cells *= static_cast<std::size_t>(2 * b + 1);
  return parallel_sum(cells, [&](std::size_t idx) {
    std::vector<std::int64_t> t(m);
    std::size_t r = idx;
    bool zero = true;
    for (int j = m - 1; j >= 0; --j) {
      auto w = static_cast<std::size_t>(2 * B[j] + 1);
      t[j] = static_cast<std::int64_t>(r % w) - B[j];
      r /= w;
      zero = zero && t[j] == 0;
    }
    if (zero) return 0.0;
    std::complex<double> s = 0;
    for (std::size_t a = 0; a < mu.size(); ++a) {
      double ph = 0;
      for (int j = 0; j < m; ++j) ph += static_cast<double>(t[j]) * y[a * m + j];
      ph -= std::floor(ph);
      s += mu.weight(a) * std::polar(1.0, -two_pi * ph);
    }
    return std::abs(s);
  }, 64);
}

inline double atomic_mass(const AtomicMeasure& mu, const ResonantDescriptor& d) {
  double s = 0;
  for (std::size_t a = 0; a < mu.size(); ++a)
    if (membership(std::span<const double>(mu.atom(a), mu.dim()), d)) s += mu.weight(a);
  return s;
}

}  // namespace detail

// Weighted rectangle: lhs = μ(R(q,δ)), rhs = δ_1⋯δ_m(1 + Σ|μ̂(t_1 q, …, t_m q)|).
// A null measure pointer selects Lebesgue measure.
inline MeasureBound measure_bound_check(const AtomicMeasure* mu, const LatticePoint& q, const std::vector<double>& deltas) {
  int m = static_cast<int>(deltas.size());
  for (double d : deltas)
    if (!(d > 0 && d < 0.5)) throw DomainError("measure_bound_check: deltas must lie in (0, 1/2)");
  double prod = 1;
  for (double d : deltas) prod *= d;
  MeasureBound out;
  auto desc = ResonantDescriptor::weighted(q, deltas);
  if (!mu) {
    out.lhs = measure_exact(desc);
    out.rhs = prod;
  } else {
    if (mu->dim() != q.dim() * m) throw DomainError("measure_bound_check: measure dimension differs from nm");
    std::vector<std::int64_t> B(m);
    for (int j = 0; j < m; ++j) B[j] = static_cast<std::int64_t>(std::floor(2 / deltas[j]));
    out.lhs = detail::atomic_mass(*mu, desc);
    out.rhs = prod * (1 + detail::fourier_box_sum(*mu, q, B));
    double dmin = *std::min_element(deltas.begin(), deltas.end());
    out.unreliable = mu->resolution() > dmin;
  }
  out.ratio = out.lhs / out.rhs;
  return out;
}

// Multiplicative star: rhs sums the rectangle bound over A_m(δ);
// rhs_decay = (δ + |q|^{-τ}δ^{τ/m}) log^{m-1}(1/δ) when τ is given.
inline MeasureBound measure_bound_check_mult(const AtomicMeasure* mu, const LatticePoint& q, int m, double delta,
                                             std::optional<double> tau = std::nullopt) {
  if (!(delta > 0) || delta > std::ldexp(1.0, -m)) throw DomainError("measure_bound_check_mult: need 0 < delta <= 2^-m");
  auto desc = ResonantDescriptor::mult(q, m, delta);
  MeasureBound out;
  auto idx = dyadic_decompose(m, delta);
  if (!mu) {
    out.lhs = measure_exact(desc);
    for (const auto& k : idx) {
      int s = 0;
      for (int v : k.k) s += v;
      out.rhs += std::ldexp(1.0, -s);
    }
  } else {
    if (mu->dim() != q.dim() * m) throw DomainError("measure_bound_check_mult: measure dimension differs from nm");
    out.lhs = detail::atomic_mass(*mu, desc);
    for (const auto& k : idx) {
      int s = 0;
      std::vector<std::int64_t> B(m);
      for (int j = 0; j < m; ++j) {
        s += k.k[j];
        B[j] = std::int64_t{1} << (k.k[j] + 1);
      }
      out.rhs += std::ldexp(1.0, -s) * (1 + detail::fourier_box_sum(*mu, q, B));
    }
    out.unreliable = mu->resolution() > delta;
  }
  if (tau) {
    double Q = static_cast<double>(q.sup_norm());
    out.rhs_decay = (delta + std::pow(Q, -*tau) * std::pow(delta, *tau / m)) * std::pow(std::log(1 / delta), m - 1);
  }
  out.ratio = out.lhs / out.rhs;
  return out;
}

// ---------------------------------------------------------------------------
// Marginal identity: the first-factor marginal's transform at x equals μ̂(x, 0).

struct MarginalIdentity {
  std::complex<double> lhs;
  std::complex<double> rhs;
  double deviation = 0;
};

inline MarginalIdentity marginal_fourier_identity(const AtomicMeasure& mu, int k, const std::vector<std::int64_t>& x) {
  if (k < 1 || k > mu.dim() || static_cast<int>(x.size()) != k)
    throw DomainError("marginal_fourier_identity: bad split");
  // marginal: merge atoms with equal first-k coordinates
  std::map<std::vector<double>, double> marg;
  for (std::size_t a = 0; a < mu.size(); ++a) marg[std::vector<double>(mu.atom(a), mu.atom(a) + k)] += mu.weight(a);
  std::vector<double> coords, weights;
  for (const auto& [c, w] : marg) {
    coords.insert(coords.end(), c.begin(), c.end());
    weights.push_back(w);
  }
  AtomicMeasure nu(k, coords, weights);
  MarginalIdentity out;
  out.lhs = atomic_fourier(nu, x);
  std::vector<std::int64_t> full(mu.dim(), 0);
  std::copy(x.begin(), x.end(), full.begin());
  out.rhs = atomic_fourier(mu, full);
  out.deviation = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace limsup
