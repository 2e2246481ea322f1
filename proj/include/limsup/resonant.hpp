#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "funcspace.hpp"
#include "intervals.hpp"
#include "lattice.hpp"
#include "numtheory.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace limsup {

enum class ResonantVariant { WeightedRect, WeightedRectCoprime, MultStar, MultStarCoprime };

inline std::string to_string(ResonantVariant v) {
  switch (v) {
    case ResonantVariant::WeightedRect: return "WeightedRect";
    case ResonantVariant::WeightedRectCoprime: return "WeightedRectCoprime";
    case ResonantVariant::MultStar: return "MultStar";
    case ResonantVariant::MultStarCoprime: return "MultStarCoprime";
  }
  return "?";
}

inline bool is_coprime_variant(ResonantVariant v) {
  return v == ResonantVariant::WeightedRectCoprime || v == ResonantVariant::MultStarCoprime;
}
inline bool is_mult_variant(ResonantVariant v) {
  return v == ResonantVariant::MultStar || v == ResonantVariant::MultStarCoprime;
}

// R(q,δ), R'(q,δ) (one δ per column) or M(q,δ), M'(q,δ) (a single δ).
struct ResonantDescriptor {
  ResonantVariant variant = ResonantVariant::WeightedRect;
  LatticePoint q;
  int m = 1;
  std::vector<double> deltas;

  static ResonantDescriptor weighted(LatticePoint q, std::vector<double> deltas, bool coprime = false) {
    ResonantDescriptor d;
    d.variant = coprime ? ResonantVariant::WeightedRectCoprime : ResonantVariant::WeightedRect;
    d.q = std::move(q);
    d.m = static_cast<int>(deltas.size());
    d.deltas = std::move(deltas);
    d.validate();
    return d;
  }
  static ResonantDescriptor mult(LatticePoint q, int m, double delta, bool coprime = false) {
    ResonantDescriptor d;
    d.variant = coprime ? ResonantVariant::MultStarCoprime : ResonantVariant::MultStar;
    d.q = std::move(q);
    d.m = m;
    d.deltas = {delta};
    d.validate();
    return d;
  }

  int n() const { return q.dim(); }
  bool coprime() const { return is_coprime_variant(variant); }
  bool multiplicative() const { return is_mult_variant(variant); }

  void validate() const {
    if (q.dim() < 1 || q.sup_norm() < 1) throw DomainError("resonant set: q must be a non-zero lattice point");
    if (m < 1) throw DomainError("resonant set: m must be positive");
    if (multiplicative() && deltas.size() != 1) throw DomainError("resonant set: multiplicative variants take one delta");
    if (!multiplicative() && static_cast<int>(deltas.size()) != m)
      throw DomainError("resonant set: weighted variants take m deltas");
    for (double d : deltas)
      if (!(d > 0) || !std::isfinite(d)) throw DomainError("resonant set: deltas must be positive");
  }
};

// t ∈ [0,1] ↦ P(U_1⋯U_m < t) for independent uniforms.
inline double v_m(int m, double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  double L = std::log(1 / t), term = 1, s = 0;
  for (int k = 0; k < m; ++k) {
    if (k > 0) term *= L / k;
    s += term;
  }
  return t * s;
}

// Distance from y to the nearest integer, and to the nearest integer coprime to d.
inline double dist_to_int(double y) { return std::abs(y - std::nearbyint(y)); }

inline double coprime_distance(double y, std::int64_t d) {
  if (d == 1) return dist_to_int(y);
  double fl = std::floor(y);
  auto f = static_cast<std::int64_t>(fl);
  double best = kInf;
  for (std::int64_t k = 0;; ++k) {
    if (static_cast<double>(k) > best) break;
    std::int64_t lo = f - k, hi = f + 1 + k;
    if (std::gcd(lo, d) == 1) best = std::min(best, y - static_cast<double>(lo));
    if (std::gcd(hi, d) == 1) best = std::min(best, static_cast<double>(hi) - y);
  }
  return best;
}

// Per-column distance u_j: ‖q·x_j‖ or the coprime analogue (gcd(p, gcd(q)) = 1).
inline std::vector<double> column_distances(std::span<const double> x, const ResonantDescriptor& desc) {
  int n = desc.n();
  if (x.size() != static_cast<std::size_t>(n * desc.m)) throw DomainError("membership: x has the wrong length");
  std::int64_t g = desc.q.gcd();
  std::vector<double> u(desc.m);
  for (int j = 0; j < desc.m; ++j) {
    double y = desc.q.dot(x.subspan(static_cast<std::size_t>(j * n), n));
    u[j] = desc.coprime() ? coprime_distance(y, g) : dist_to_int(y);
  }
  return u;
}

inline bool membership(std::span<const double> x, const ResonantDescriptor& desc) {
  auto u = column_distances(x, desc);
  if (desc.multiplicative()) {
    double p = 1;
    for (double v : u) p *= v;
    return p < desc.deltas[0];
  }
  for (int j = 0; j < desc.m; ++j)
    if (!(u[j] < desc.deltas[j])) return false;
  return true;
}

namespace detail {

// Lebesgue measure of {x ∈ [0,1]^n : u(q·x) < δ} for the coprime distance.
// q·x mod gcd(q) is uniform on [0, gcd(q)), so each gap g between
// consecutive coprime integers contributes min(g, 2δ).
inline double coprime_column_measure(std::int64_t d, double delta) {
  double s = 0;
  for (auto [g, count] : coprime_gaps(d))
    s += static_cast<double>(count) * std::min(static_cast<double>(g), 2 * delta);
  return s / static_cast<double>(d);
}

}  // namespace detail

inline double measure_exact(const ResonantDescriptor& desc) {
  desc.validate();
  std::int64_t d = desc.q.gcd();
  switch (desc.variant) {
    case ResonantVariant::WeightedRect: {
      double p = 1;
      for (double dl : desc.deltas) p *= std::min(2 * dl, 1.0);
      return p;
    }
    case ResonantVariant::WeightedRectCoprime: {
      double p = 1;
      for (double dl : desc.deltas) p *= detail::coprime_column_measure(d, dl);
      return p;
    }
    case ResonantVariant::MultStar:
      return v_m(desc.m, std::ldexp(desc.deltas[0], desc.m));
    case ResonantVariant::MultStarCoprime: {
      // u_j = (g_j/2)·U_j with g_j drawn from the gap distribution
      std::vector<std::pair<double, double>> gaps;  // (g/2, probability)
      for (auto [g, count] : coprime_gaps(d))
        gaps.push_back({g / 2.0, static_cast<double>(count * g) / static_cast<double>(d)});
      double total = 0;
      std::function<void(int, double, double)> rec = [&](int j, double w, double scale) {
        if (j == desc.m) {
          total += w * v_m(desc.m, desc.deltas[0] / scale);
          return;
        }
        for (auto [h, p] : gaps) rec(j + 1, w * p, scale * h);
      };
      rec(0, 1.0, 1.0);
      return total;
    }
  }
  return 0;
}

struct McEstimate {
  double value = 0;
  double std_error = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

inline McEstimate proportion_estimate(std::size_t hits, std::size_t samples, std::uint64_t seed) {
  McEstimate e;
  e.samples = samples;
  e.seed = seed;
  e.value = static_cast<double>(hits) / static_cast<double>(samples);
  e.std_error = std::sqrt(std::max(e.value * (1 - e.value), 0.0) / static_cast<double>(samples));
  return e;
}

// Hit-or-miss Monte-Carlo estimate of the descriptor's measure.
inline McEstimate measure_mc(const ResonantDescriptor& desc, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw DomainError("measure_mc: need samples");
  std::size_t dim = static_cast<std::size_t>(desc.n() * desc.m);
  double hits = parallel_sum(samples, [&](std::size_t i) {
    CounterRng rng(seed, i);
    std::vector<double> x(dim);
    for (auto& v : x) v = rng.uniform();
    return membership(x, desc) ? 1.0 : 0.0;
  });
  return proportion_estimate(static_cast<std::size_t>(hits), samples, seed);
}

// ---------------------------------------------------------------------------
// Dyadic decomposition A_m(δ)

struct DyadicIndex {
  std::vector<int> k;
  int N = 0;
  friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
};

// The N with 2^{-N-1} < δ ≤ 2^{-N}.
inline int dyadic_N(double delta) {
  if (!(delta > 0) || delta > 1) throw DomainError("dyadic_N: delta must lie in (0, 1]");
  int e = 0;
  double f = std::frexp(delta, &e);
  return f == 0.5 ? 1 - e : -e;
}

inline std::vector<DyadicIndex> dyadic_decompose(int m, double delta) {
  if (m < 1) throw DomainError("dyadic_decompose: m must be positive");
  if (delta > std::ldexp(1.0, -m)) throw DomainError("dyadic_decompose: delta must not exceed 2^-m");
  int N = dyadic_N(delta);
  int total = N - m;
  std::vector<DyadicIndex> out;
  std::vector<int> k(m, 0);
  std::function<void(int, int)> rec = [&](int j, int left) {
    if (j == m - 1) {
      k[j] = left;
      out.push_back({k, N});
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[j] = v;
      rec(j + 1, left - v);
    }
  };
  rec(0, total);
  return out;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// Largest k ≥ 0 with u < 2^{-k}; -1 when u ≥ 1, `cap` when u = 0.
inline int dyadic_level(double u, int cap) {
  if (u >= 1) return -1;
  if (u <= 0) return cap;
  int e = 0;
  std::frexp(u, &e);
  return std::min(-e, cap);
}

struct SandwichReport {
  std::size_t samples = 0;
  std::size_t in_inner = 0;
  std::size_t in_middle = 0;
  std::size_t in_outer = 0;
  std::size_t left_violations = 0;   // in M'(q,δ) but not in the dyadic union
  std::size_t right_violations = 0;  // in the dyadic union but not in M'(q,2^{m+1}δ)
  std::size_t violations() const { return left_violations + right_violations; }
};

// Checks M'(q,δ) ⊂ ∪_{k∈A_m(δ)} R'(q,2^{-k}) ⊂ M'(q,2^{m+1}δ) pointwise.
// Half the points are uniform, half are pushed close to resonant planes so
// the small products are actually exercised.
inline SandwichReport sandwich_check(const LatticePoint& q, int m, double delta, std::size_t samples,
                                     std::uint64_t seed) {
  if (m < 1) throw DomainError("sandwich_check: m must be positive");
  if (delta > std::ldexp(1.0, -m)) throw DomainError("sandwich_check: delta must not exceed 2^-m");
  int N = dyadic_N(delta);
  int T = N - m;
  int n = q.dim();
  std::int64_t g = q.gcd();
  int lead = 0;
  for (int l = 0; l < n; ++l)
    if (std::llabs(q.coords[l]) > std::llabs(q.coords[lead])) lead = l;
  auto probe = ResonantDescriptor::mult(q, m, delta, true);

  struct Row {
    unsigned char inner = 0, middle = 0, outer = 0;
  };
  auto rows = parallel_map(samples, [&](std::size_t i) {
    CounterRng rng(seed, i);
    std::vector<double> x(static_cast<std::size_t>(n * m));
    for (auto& v : x) v = rng.uniform();
    if (i % 2 == 1) {
      for (int j = 0; j < m; ++j) {
        std::span<double> xj(x.data() + j * n, n);
        double y = q.dot(xj);
        auto p0 = static_cast<std::int64_t>(std::nearbyint(y));
        while (std::gcd(p0, g) != 1) ++p0;
        double t = rng.log_uniform(std::ldexp(1.0, -N - 3), 1.0) * (rng.uniform() < 0.5 ? -1 : 1);
        double shift = (static_cast<double>(p0) + t - y) / static_cast<double>(q.coords[lead]);
        double moved = xj[lead] + shift;
        if (moved >= 0 && moved <= 1) xj[lead] = moved;
      }
    }
    auto u = column_distances(x, probe);
    double prod = 1;
    bool alive = true;
    int sum = 0;
    for (double v : u) {
      prod *= v;
      int c = dyadic_level(v, T);
      if (c < 0) alive = false;
      sum += std::max(c, 0);
    }
    Row r;
    r.inner = prod < delta;
    r.middle = alive && sum >= T;
    r.outer = prod < std::ldexp(delta, m + 1);
    return r;
  });
  SandwichReport rep;
  rep.samples = samples;
  for (const auto& r : rows) {
    rep.in_inner += r.inner;
    rep.in_middle += r.middle;
    rep.in_outer += r.outer;
    if (r.inner && !r.middle) ++rep.left_violations;
    if (r.middle && !r.outer) ++rep.right_violations;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Λ(k) = {q : φ(q)/q ≥ 1 - 1/k}

struct LambdaReport {
  std::vector<std::int64_t> members;
  std::vector<std::pair<std::int64_t, double>> densities;  // (checkpoint, counting density)
  double min_density = 0;
};

inline LambdaReport lambda_set(int k, std::int64_t qmax) {
  if (k < 2) throw DomainError("lambda_set: k must be at least 2");
  if (qmax < 1) throw DomainError("lambda_set: qmax must be positive");
  auto phi = totient_sieve(qmax);
  LambdaReport rep;
  std::int64_t next = 1;
  for (std::int64_t q = 1; q <= qmax; ++q) {
    if (k * phi[q] >= (k - 1) * q) rep.members.push_back(q);
    if (q == next || q == qmax) {
      rep.densities.push_back({q, static_cast<double>(rep.members.size()) / static_cast<double>(q)});
      if (q == next) next *= 2;
    }
  }
  rep.min_density = 1;
  for (auto [q, d] : rep.densities) rep.min_density = std::min(rep.min_density, d);
  return rep;
}

// ---------------------------------------------------------------------------
// Γ(q) / Δ(q): one representative of each ±q pair, the one with the larger
// value; exact ties keep the lexicographically larger point.

struct SignSelection {
  std::vector<LatticePoint> points;
  double subset_sum = 0;
  double full_sum = 0;
};

inline SignSelection sign_select(const std::function<double(std::span<const std::int64_t>)>& value, int n,
                                 std::int64_t q) {
  SignSelection sel;
  for_each_shell_point(n, q, [&](std::span<const std::int64_t> c) {
    double v = value(c);
    sel.full_sum += v;
    std::size_t lead = 0;
    while (c[lead] == 0) ++lead;
    if (c[lead] < 0) return;  // handled from the positive representative
    std::vector<std::int64_t> neg(c.begin(), c.end());
    for (auto& x : neg) x = -x;
    double w = value(std::span<const std::int64_t>(neg));
    LatticePoint pick;
    if (w > v) {
      pick.coords = std::move(neg);
      sel.subset_sum += w;
    } else {
      pick.coords.assign(c.begin(), c.end());
      sel.subset_sum += v;
    }
    sel.points.push_back(std::move(pick));
  });
  std::sort(sel.points.begin(), sel.points.end());
  return sel;
}

inline SignSelection sign_select(const WeightSystem& ws, std::int64_t q) {
  return sign_select(
      [&](std::span<const std::int64_t> c) {
        double p = 1;
        for (double v : ws.values(c)) p *= v;
        return p;
      },
      ws.n(), q);
}

inline SignSelection sign_select(const ApproximatingFunction& psi, std::int64_t q) {
  return sign_select([&](std::span<const std::int64_t> c) { return psi(c); }, psi.n(), q);
}

// ---------------------------------------------------------------------------
// n = 1 interval machinery

// {x ∈ [0,1] : |qx - p| < δ for some integer p (coprime to q if asked)}.
template <class T>
IntervalSet<T> resonant_intervals_1d(std::int64_t q, T delta, bool coprime, T tol = T(0)) {
  q = std::llabs(q);
  if (q == 0) throw DomainError("resonant_intervals_1d: q must be non-zero");
  // δ ≤ 1 keeps every centre that reaches [0,1] inside p ∈ [0, q]
  if (!(T(0) < delta) || T(1) < delta) throw DomainError("resonant_intervals_1d: delta must lie in (0, 1]");
  std::vector<Interval<T>> parts;
  T Q(q);
  for (std::int64_t p = 0; p <= q; ++p) {
    if (coprime && std::gcd(p, q) != 1) continue;
    T lo = (T(p) - delta) / Q, hi = (T(p) + delta) / Q;
    if (lo < T(0)) lo = T(0);
    if (T(1) < hi) hi = T(1);
    if (lo < hi) parts.push_back({lo, hi});
  }
  return IntervalSet<T>::from_unsorted(std::move(parts), tol);
}

namespace detail {

inline const double kMergeTol = 1e-12;

// Level sets L_0 ⊇ L_1 ⊇ … ⊇ L_T of one column for a multiplicative
// descriptor with n = 1; L_k = {u < 2^{-k}}.
inline std::vector<IntervalSet<double>> level_sets_1d(const ResonantDescriptor& d, int T) {
  std::vector<IntervalSet<double>> out;
  std::int64_t q = d.q.coords[0];
  for (int k = 0; k <= T; ++k) out.push_back(resonant_intervals_1d<double>(q, std::ldexp(1.0, -k), d.coprime(), kMergeTol));
  return out;
}

}  // namespace detail

// Measure of the dyadic union ∪_{k∈A_m(δ)} R'(q,2^{-k}) for n = 1 (exact
// up to floating-point interval arithmetic).
inline double dyadic_union_measure_1d(const ResonantDescriptor& d) {
  if (d.n() != 1 || !d.multiplicative()) throw DomainError("dyadic_union_measure_1d: n = 1 multiplicative only");
  int N = dyadic_N(d.deltas[0]);
  int T = N - d.m;
  if (T < 0) throw DomainError("dyadic_union_measure_1d: delta must not exceed 2^-m");
  auto L = detail::level_sets_1d(d, T);
  // pmf of the capped level, index 0 is "dead"
  std::vector<double> pmf(T + 2, 0);
  auto G = [&](int i) { return i < 0 ? 1.0 : i > T ? 0.0 : L[i].measure(); };
  for (int i = -1; i <= T; ++i) pmf[i + 1] = G(i) - G(i + 1);
  std::vector<double> state(T + 1, 0);  // capped partial sums
  state[0] = 1;
  for (int j = 0; j < d.m; ++j) {
    std::vector<double> next(T + 1, 0);
    for (int s = 0; s <= T; ++s) {
      if (state[s] == 0) continue;
      for (int l = 0; l <= T; ++l) next[std::min(T, s + l)] += state[s] * pmf[l + 1];
    }
    state = std::move(next);
  }
  return state[T];
}

// Exact measure of the intersection of two n = 1 descriptors of the same family.
inline double pairwise_intersection_1d(const ResonantDescriptor& a, const ResonantDescriptor& b) {
  if (a.n() != 1 || b.n() != 1) throw DomainError("pairwise_intersection_1d: n = 1 only");
  if (a.multiplicative() != b.multiplicative() || a.m != b.m)
    throw DomainError("pairwise_intersection_1d: descriptors must share variant family and m");
  std::int64_t qa = a.q.coords[0], qb = b.q.coords[0];
  if (!a.multiplicative()) {
    double p = 1;
    for (int j = 0; j < a.m; ++j) {
      auto sa = resonant_intervals_1d<double>(qa, a.deltas[j], a.coprime(), detail::kMergeTol);
      auto sb = resonant_intervals_1d<double>(qb, b.deltas[j], b.coprime(), detail::kMergeTol);
      p *= sa.intersect(sb).measure();
    }
    return p;
  }
  int Ta = dyadic_N(a.deltas[0]) - a.m, Tb = dyadic_N(b.deltas[0]) - b.m;
  if (Ta < 0 || Tb < 0) throw DomainError("pairwise_intersection_1d: delta must not exceed 2^-m");
  auto La = detail::level_sets_1d(a, Ta);
  auto Lb = detail::level_sets_1d(b, Tb);
  // G(i,l) = |{c_a ≥ i} ∩ {c_b ≥ l}| with index -1 meaning no constraint
  std::vector<std::vector<double>> G(Ta + 3, std::vector<double>(Tb + 3, 0));
  for (int i = -1; i <= Ta; ++i) {
    for (int l = -1; l <= Tb; ++l) {
      double v;
      if (i < 0 && l < 0) v = 1;
      else if (i < 0) v = Lb[l].measure();
      else if (l < 0) v = La[i].measure();
      else v = La[i].intersect(Lb[l]).measure();
      G[i + 1][l + 1] = v;
    }
  }
  auto g = [&](int i, int l) { return (i > Ta || l > Tb) ? 0.0 : G[i + 1][l + 1]; };
  // joint pmf over capped levels (-1 = dead)
  std::vector<std::vector<double>> pmf(Ta + 2, std::vector<double>(Tb + 2, 0));
  for (int i = -1; i <= Ta; ++i)
    for (int l = -1; l <= Tb; ++l)
      pmf[i + 1][l + 1] = std::max(0.0, g(i, l) - g(i + 1, l) - g(i, l + 1) + g(i + 1, l + 1));
  // DP over columns; state -1 is dead, otherwise capped sums
  std::vector<std::vector<double>> st(Ta + 2, std::vector<double>(Tb + 2, 0));
  st[1][1] = 1;
  for (int j = 0; j < a.m; ++j) {
    std::vector<std::vector<double>> nx(Ta + 2, std::vector<double>(Tb + 2, 0));
    for (int sa = -1; sa <= Ta; ++sa) {
      for (int sb = -1; sb <= Tb; ++sb) {
        double w = st[sa + 1][sb + 1];
        if (w == 0) continue;
        for (int i = -1; i <= Ta; ++i) {
          for (int l = -1; l <= Tb; ++l) {
            double p = pmf[i + 1][l + 1];
            if (p == 0) continue;
            int na = (sa < 0 || i < 0) ? -1 : std::min(Ta, sa + i);
            int nb = (sb < 0 || l < 0) ? -1 : std::min(Tb, sb + l);
            nx[na + 1][nb + 1] += w * p;
          }
        }
      }
    }
    st = std::move(nx);
  }
  return st[Ta + 1][Tb + 1];
}

// Measure used alongside pairwise_intersection_1d for ratio statements.
inline double set_measure_1d(const ResonantDescriptor& d) {
  if (d.multiplicative()) return dyadic_union_measure_1d(d);
  return measure_exact(d);
}

struct QuasiSpec {
  std::size_t max_pairs = 20000;
  std::size_t samples = 200000;  // Monte-Carlo budget per pair when n ≥ 2
  std::uint64_t seed = 7;
};

struct QuasiReport {
  double c_raw = 0;  // max ratio over pairs
  double c = 1;      // floored at 1
  double lamperti_bound = 1;
  std::size_t pairs_used = 0;
  std::size_t pairs_excluded = 0;
  bool exact = true;
};

// C = max μ(E_i ∩ E_j) / (μ(E_i) μ(E_j)) over pairs i < j; 1/C bounds the
// limsup measure from below when the measure sum diverges.
inline QuasiReport quasi_independence_report(const std::vector<ResonantDescriptor>& family, const QuasiSpec& spec = {}) {
  QuasiReport rep;
  std::size_t k = family.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t all = k * (k - (k > 0 ? 1 : 0)) / 2;
  if (all <= spec.max_pairs) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) pairs.push_back({i, j});
  } else {
    for (std::size_t t = 0; t < spec.max_pairs; ++t) {
      CounterRng rng(spec.seed ^ 0x5bd1e995ULL, t);
      std::size_t i = rng.below(k), j = rng.below(k - 1);
      if (j >= i) ++j;
      pairs.push_back({std::min(i, j), std::max(i, j)});
    }
  }
  bool all_1d = std::all_of(family.begin(), family.end(), [](const auto& d) { return d.n() == 1; });
  rep.exact = all_1d;
  std::vector<double> mu(k);
  for (std::size_t i = 0; i < k; ++i) mu[i] = all_1d ? set_measure_1d(family[i]) : measure_exact(family[i]);
  auto ratios = parallel_map(pairs.size(), [&](std::size_t t) {
    auto [i, j] = pairs[t];
    double denom = mu[i] * mu[j];
    if (!(denom > 0)) return -1.0;
    double inter;
    if (all_1d) {
      inter = pairwise_intersection_1d(family[i], family[j]);
    } else {
      std::size_t dim = static_cast<std::size_t>(family[i].n() * family[i].m);
      std::size_t hits = 0;
      for (std::size_t s = 0; s < spec.samples; ++s) {
        CounterRng rng(spec.seed, t * spec.samples + s);
        std::vector<double> x(dim);
        for (auto& v : x) v = rng.uniform();
        if (membership(x, family[i]) && membership(x, family[j])) ++hits;
      }
      inter = static_cast<double>(hits) / static_cast<double>(spec.samples);
    }
    return inter / denom;
  });
  for (double r : ratios) {
    if (r < 0) {
      ++rep.pairs_excluded;
      continue;
    }
    ++rep.pairs_used;
    rep.c_raw = std::max(rep.c_raw, r);
  }
  rep.c = std::max(rep.c_raw, 1.0);
  rep.lamperti_bound = 1 / rep.c;
  return rep;
}

}  // namespace limsup
