#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "content.hpp"
#include "errors.hpp"
#include "funcspace.hpp"
#include "instance.hpp"
#include "lattice.hpp"
#include "parallel.hpp"
#include "resonant.hpp"

namespace limsup {

// ---------------------------------------------------------------------------
// t_q(Ψ, f) and K_q(i)

inline std::vector<int> kq_set(const std::vector<double>& psi_values, int i) {
  std::vector<int> out;
  for (int j = 0; j < static_cast<int>(psi_values.size()); ++j)
    if (psi_values[j] > psi_values[i]) out.push_back(j);
  return out;
}

inline std::vector<int> kq_set(const WeightSystem& ws, std::span<const std::int64_t> q, int i) {
  if (i < 0 || i >= ws.m()) throw DomainError("kq_set: index out of range");
  return kq_set(ws.values(q), i);
}

struct TqResult {
  double value = 0;
  double log_value = 0;
  int argmin = -1;
};

// min_i f(ψ_i/|q|)(ψ_i/|q|)^{(1-n)m} ∏_{j∈K_q(i)} ψ_j/ψ_i, evaluated in logs.
inline TqResult t_q(const std::vector<double>& psi, int n, std::int64_t qnorm, const DimensionFunction& f) {
  int m = static_cast<int>(psi.size());
  double lq = std::log(static_cast<double>(qnorm));
  TqResult best;
  best.log_value = kInf;
  for (int i = 0; i < m; ++i) {
    if (!(psi[i] > 0)) throw Inapplicable("t_q: zero approximating value");
    double r = psi[i] / static_cast<double>(qnorm);
    double v = f.log_eval(r) + (1 - n) * m * (std::log(psi[i]) - lq);
    for (int j : kq_set(psi, i)) v += std::log(psi[j]) - std::log(psi[i]);
    if (v < best.log_value) {
      best.log_value = v;
      best.argmin = i;
    }
  }
  best.value = std::exp(best.log_value);
  return best;
}

inline TqResult t_q(const WeightSystem& ws, const DimensionFunction& f, std::span<const std::int64_t> q) {
  std::int64_t s = 0;
  for (auto c : q) s = std::max<std::int64_t>(s, std::llabs(c));
  return t_q(ws.values(q), ws.n(), s, f);
}

// ---------------------------------------------------------------------------
// Symbolic asymptotics: q^a log^b q

struct Asym {
  double a = 0;
  double b = 0;
  Asym operator+(const Asym& o) const { return {a + o.a, b + o.b}; }
  Asym operator-(const Asym& o) const { return {a - o.a, b - o.b}; }
  Asym operator*(double k) const { return {a * k, b * k}; }
};

inline constexpr double kSymTol = 1e-12;

// Σ q^a log^b q converges iff a < -1, or a = -1 and b < -1.
inline bool p_series_converges(const Asym& x) {
  if (x.a < -1 - kSymTol) return true;
  if (x.a > -1 + kSymTol) return false;
  return x.b < -1 - kSymTol;
}

namespace detail {

inline std::optional<Asym> asym_of(const ApproximatingFunction& psi) {
  auto t = psi.asymptotic();
  if (!t) return std::nullopt;
  if (std::holds_alternative<ConstantApprox>(psi.kind()) && psi.coefficient() == 0) return std::nullopt;
  return Asym{-t->first, t->second};
}

// f(r) for r ≍ q^a log^b q with a < 0.
inline std::optional<Asym> asym_apply(const DimensionFunction& f, const Asym& r) {
  if (!(r.a < 0)) return std::nullopt;
  if (auto* p = std::get_if<PowerDim>(&f.kind())) return Asym{p->s * r.a, p->s * r.b};
  if (auto* p = std::get_if<PowerLogDim>(&f.kind())) return Asym{p->s * r.a, p->s * r.b + p->p};
  return std::nullopt;
}

// log(1/ψ) for ψ ≍ q^{-τ} log^p q.
inline std::optional<Asym> asym_log_inverse(const ApproximatingFunction& psi) {
  auto t = psi.asymptotic();
  if (!t) return std::nullopt;
  if (t->first > 0) return Asym{0, 1};
  if (t->second == 0) return Asym{0, 0};
  return std::nullopt;  // log log growth is outside the q^a log^b scale
}

// Lexicographic eventual order of ψ_j: larger exponent pair, then coefficient.
inline int eventual_cmp(const ApproximatingFunction& x, const ApproximatingFunction& y) {
  auto ax = *asym_of(x), ay = *asym_of(y);
  auto cmp = [](double u, double v) { return std::abs(u - v) <= kSymTol ? 0 : (u < v ? -1 : 1); };
  if (int c = cmp(ax.a, ay.a)) return c;
  if (int c = cmp(ax.b, ay.b)) return c;
  return cmp(x.coefficient(), y.coefficient());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Series

enum class SeriesKind { KG, Jarnik, Weighted, WeightedHausdorff, MultLebesgue, MultHausdorff, MultHausdorffLog };

inline std::string to_string(SeriesKind k) {
  switch (k) {
    case SeriesKind::KG: return "KG";
    case SeriesKind::Jarnik: return "Jarnik";
    case SeriesKind::Weighted: return "Weighted";
    case SeriesKind::WeightedHausdorff: return "WeightedHausdorff";
    case SeriesKind::MultLebesgue: return "MultLebesgue";
    case SeriesKind::MultHausdorff: return "MultHausdorff";
    case SeriesKind::MultHausdorffLog: return "MultHausdorffLog";
  }
  return "?";
}

inline bool is_hausdorff_kind(SeriesKind k) {
  return k == SeriesKind::Jarnik || k == SeriesKind::WeightedHausdorff || k == SeriesKind::MultHausdorff ||
         k == SeriesKind::MultHausdorffLog;
}

struct SeriesDescriptor {
  SeriesKind kind = SeriesKind::KG;
  ProblemInstance instance;
  std::optional<DimensionFunction> f;

  SeriesDescriptor(SeriesKind k, ProblemInstance inst, std::optional<DimensionFunction> fn = std::nullopt)
      : kind(k), instance(std::move(inst)), f(std::move(fn)) {
    if (!f && instance.f && is_hausdorff_kind(kind)) f = instance.f;
    if (is_hausdorff_kind(kind) && !f) throw DomainError("series: Hausdorff kinds need a dimension function");
    if (!is_hausdorff_kind(kind)) f.reset();
    bool mult = kind == SeriesKind::MultLebesgue || kind == SeriesKind::MultHausdorff ||
                kind == SeriesKind::MultHausdorffLog;
    if (mult && instance.mode != Mode::multiplicative) throw DomainError("series: multiplicative kind on a non-multiplicative instance");
    if (!mult && instance.mode == Mode::multiplicative) throw DomainError("series: weighted kind on a multiplicative instance");
  }
};

enum class Classification { ConvergesSymbolic, DivergesSymbolic, ConvergesHeuristic, DivergesHeuristic, Unknown };

inline std::string to_string(Classification c) {
  switch (c) {
    case Classification::ConvergesSymbolic: return "ConvergesSymbolic";
    case Classification::DivergesSymbolic: return "DivergesSymbolic";
    case Classification::ConvergesHeuristic: return "ConvergesHeuristic";
    case Classification::DivergesHeuristic: return "DivergesHeuristic";
    case Classification::Unknown: return "Unknown";
  }
  return "?";
}

inline bool is_symbolic(Classification c) {
  return c == Classification::ConvergesSymbolic || c == Classification::DivergesSymbolic;
}
inline bool converges(Classification c) {
  return c == Classification::ConvergesSymbolic || c == Classification::ConvergesHeuristic;
}

struct SeriesEstimate {
  std::vector<std::pair<int, double>> block_sums;  // (k, Σ over 2^k ≤ |q| < 2^{k+1})
  double partial_sum = 0;
  std::optional<double> growth_exponent;  // slope of log2 block sums
  double residual = 0;
  Classification classification = Classification::Unknown;
  std::optional<Asym> symbolic;  // summand·shell ≍ q^a log^b q
  std::size_t excluded = 0;      // shells where a term could not be evaluated
  bool saturated = false;
};

inline constexpr double kHeuristicEps = 0.05;

// Asymptotic of the summand summed over a shell, when the family is symbolic.
inline std::optional<Asym> series_asymptotic(const SeriesDescriptor& desc) {
  const auto& inst = desc.instance;
  int n = inst.n, m = inst.m;
  Asym shell{static_cast<double>(n - 1), 0};
  auto ws = inst.psi_system();
  if (!ws.symbolic()) return std::nullopt;
  std::vector<Asym> P;
  for (const auto& c : ws.components()) {
    auto a = detail::asym_of(c);
    if (!a) return std::nullopt;
    P.push_back(*a);
  }
  Asym one_q{-1, 0};
  switch (desc.kind) {
    case SeriesKind::KG:
      return P[0] * m + shell;
    case SeriesKind::Weighted: {
      Asym s;
      for (auto& p : P) s = s + p;
      return s + shell;
    }
    case SeriesKind::Jarnik: {
      Asym R = P[0] + one_q;
      auto F = detail::asym_apply(*desc.f, R);
      if (!F) return std::nullopt;
      return *F + R * static_cast<double>((1 - n) * m) + Asym{static_cast<double>(m), 0} + shell;
    }
    case SeriesKind::WeightedHausdorff: {
      std::optional<Asym> best;
      for (int i = 0; i < m; ++i) {
        Asym R = P[i] + one_q;
        auto F = detail::asym_apply(*desc.f, R);
        if (!F) return std::nullopt;
        Asym term = *F + R * static_cast<double>((1 - n) * m);
        for (int j = 0; j < m; ++j)
          if (detail::eventual_cmp(ws[j], ws[i]) > 0) term = term + (P[j] - P[i]);
        if (!best || term.a < best->a - kSymTol || (std::abs(term.a - best->a) <= kSymTol && term.b < best->b))
          best = term;
      }
      return *best + Asym{static_cast<double>(m), 0} + shell;
    }
    case SeriesKind::MultLebesgue: {
      auto L = detail::asym_log_inverse(ws[0]);
      if (!L) return std::nullopt;
      return P[0] + *L * static_cast<double>(m - 1) + shell;
    }
    case SeriesKind::MultHausdorff:
    case SeriesKind::MultHausdorffLog: {
      Asym R = P[0] + one_q;
      auto F = detail::asym_apply(*desc.f, R);
      if (!F) return std::nullopt;
      Asym t = *F + R * static_cast<double>(1 - n * m) + Asym{1, 0} + shell;
      if (desc.kind == SeriesKind::MultHausdorffLog) {
        auto L = detail::asym_log_inverse(ws[0]);
        if (!L) return std::nullopt;
        t = t + *L * static_cast<double>(m - 1);
      }
      return t;
    }
  }
  return std::nullopt;
}

// Summand at one lattice point; nullopt when it cannot be evaluated there.
inline std::optional<double> series_term(const SeriesDescriptor& desc, const WeightSystem& ws,
                                         std::span<const std::int64_t> q, std::int64_t qnorm) {
  const auto& inst = desc.instance;
  int n = inst.n, m = inst.m;
  double Q = static_cast<double>(qnorm);
  try {
    switch (desc.kind) {
      case SeriesKind::KG:
        return std::pow(ws[0](q), m);
      case SeriesKind::Weighted: {
        double p = 1;
        for (double v : ws.values(q)) p *= v;
        return p;
      }
      case SeriesKind::Jarnik: {
        double psi = ws[0](q);
        if (!(psi > 0)) return std::nullopt;
        double r = psi / Q;
        return std::exp(desc.f->log_eval(r) + (1 - n) * m * std::log(r) + m * std::log(Q));
      }
      case SeriesKind::WeightedHausdorff:
        return std::exp(t_q(ws.values(q), n, qnorm, *desc.f).log_value + m * std::log(Q));
      case SeriesKind::MultLebesgue: {
        double psi = ws[0](q);
        if (!(psi > 0)) return 0.0;
        return psi * std::pow(std::max(std::log(1 / psi), 0.0), m - 1);
      }
      case SeriesKind::MultHausdorff:
      case SeriesKind::MultHausdorffLog: {
        double psi = ws[0](q);
        if (!(psi > 0)) return std::nullopt;
        double r = psi / Q;
        double v = std::exp(desc.f->log_eval(r) + (1 - n * m) * std::log(r) + std::log(Q));
        if (desc.kind == SeriesKind::MultHausdorffLog) v *= std::pow(std::max(std::log(1 / psi), 0.0), m - 1);
        return v;
      }
    }
  } catch (const DomainError&) {
    return std::nullopt;
  } catch (const Inapplicable&) {
    return std::nullopt;
  }
  return std::nullopt;
}

struct ShellTerm {
  double value = 0;
  bool excluded = false;
};

// Dyadic block sums of a per-point term over shells 2^k ≤ |q| < 2^{k+1}.
// Univariable terms are evaluated once per shell and scaled by its size.
template <class Term>
std::vector<std::pair<int, double>> dyadic_block_sums(int n, bool univariable, int kmax, Term term,
                                                      std::size_t* excluded = nullptr) {
  if (kmax < 1 || kmax > 40) throw DomainError("dyadic_block_sums: Kmax must lie in [1, 40]");
  std::int64_t qmax = (std::int64_t{1} << kmax) - 1;
  auto shells = parallel_map(static_cast<std::size_t>(qmax), [&](std::size_t idx) {
    std::int64_t q = static_cast<std::int64_t>(idx) + 1;
    ShellTerm st;
    if (univariable) {
      std::vector<std::int64_t> rep(n, 0);
      rep[0] = q;
      auto v = term(std::span<const std::int64_t>(rep), q);
      if (!v) st.excluded = true;
      else st.value = *v * shell_count(n, q);
    } else {
      for_each_shell_point(n, q, [&](std::span<const std::int64_t> c) {
        auto v = term(c, q);
        if (!v) st.excluded = true;
        else st.value += *v;
      });
    }
    return st;
  });
  std::vector<std::pair<int, double>> blocks;
  std::size_t excl = 0;
  for (int k = 0; k < kmax; ++k) {
    double s = 0;
    for (std::int64_t q = std::int64_t{1} << k; q < (std::int64_t{1} << (k + 1)); ++q) {
      const auto& st = shells[q - 1];
      if (st.excluded) ++excl;
      s += st.value;
    }
    blocks.push_back({k, s});
  }
  if (excluded) *excluded = excl;
  return blocks;
}

struct LineFit {
  double slope = 0;
  double residual = 0;
};

// Least squares of log2(block) on k over the last ⌈K/2⌉ blocks.
inline std::optional<LineFit> fit_growth(const std::vector<std::pair<int, double>>& blocks) {
  std::size_t K = blocks.size();
  std::size_t w = (K + 1) / 2;
  if (w < 2) return std::nullopt;
  std::vector<double> xs, ys;
  for (std::size_t i = K - w; i < K; ++i) {
    double b = blocks[i].second;
    if (!(b > 0) || !std::isfinite(b)) return std::nullopt;
    xs.push_back(blocks[i].first);
    ys.push_back(std::log2(b));
  }
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (my + fit.slope * (xs[i] - mx));
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / xs.size());
  return fit;
}

inline Classification heuristic_class(std::optional<double> slope) {
  if (!slope) return Classification::Unknown;
  if (*slope < -kHeuristicEps) return Classification::ConvergesHeuristic;
  if (*slope > kHeuristicEps) return Classification::DivergesHeuristic;
  return Classification::Unknown;
}

inline SeriesEstimate series_sum(const SeriesDescriptor& desc, int kmax) {
  SeriesEstimate est;
  auto ws = desc.instance.psi_system();
  if (ws.max_norm() < (std::int64_t{1} << kmax) - 1)
    throw DomainError("series_sum: approximating function not evaluable up to 2^Kmax");
  est.block_sums = dyadic_block_sums(
      desc.instance.n, ws.univariable(), kmax,
      [&](std::span<const std::int64_t> q, std::int64_t qn) { return series_term(desc, ws, q, qn); }, &est.excluded);
  for (auto& [k, s] : est.block_sums) {
    if (!std::isfinite(s)) {
      s = std::numeric_limits<double>::max();
      est.saturated = true;
    }
    est.partial_sum += s;
  }
  if (!std::isfinite(est.partial_sum)) {
    est.partial_sum = std::numeric_limits<double>::max();
    est.saturated = true;
  }
  if (auto fit = fit_growth(est.block_sums)) {
    est.growth_exponent = fit->slope;
    est.residual = fit->residual;
  }
  est.symbolic = series_asymptotic(desc);
  if (est.symbolic)
    est.classification =
        p_series_converges(*est.symbolic) ? Classification::ConvergesSymbolic : Classification::DivergesSymbolic;
  else
    est.classification = heuristic_class(est.growth_exponent);
  return est;
}

// Symbolic classification only (no summation).
inline std::optional<bool> series_converges_symbolic(const SeriesDescriptor& desc) {
  auto a = series_asymptotic(desc);
  if (!a) return std::nullopt;
  return p_series_converges(*a);
}

// ---------------------------------------------------------------------------
// Critical exponents s(ψ), s(Ψ), τ(ψ)

enum class CriticalKind { s_psi, s_Psi, tau_psi };

struct CriticalExponent {
  std::optional<double> value;
  std::string method;  // "symbolic", "bisection" or "unknown"
};

namespace detail {

inline std::optional<double> critical_symbolic(CriticalKind kind, const ProblemInstance& inst) {
  auto ws = inst.psi_system();
  if (!ws.symbolic()) return std::nullopt;
  double n = inst.n, m = inst.m;
  double tmax = 0;
  for (const auto& c : ws.components()) tmax = std::max(tmax, c.asymptotic()->first);
  double t0 = ws[0].asymptotic()->first;
  switch (kind) {
    case CriticalKind::s_psi: return n / (1 + t0);
    case CriticalKind::s_Psi: return n / (1 + tmax);
    case CriticalKind::tau_psi: return n * m / (m + t0);
  }
  return std::nullopt;
}

}  // namespace detail

// Bisection on the sign of the fitted block-growth exponent of
// Σ_q g(q)^s, where g is the per-kind base function.
inline std::optional<double> critical_bisection(CriticalKind kind, const ProblemInstance& inst, int kmax = 16,
                                                double tol = 1e-3) {
  auto ws = inst.psi_system();
  int m = inst.m;
  auto base = [&](std::span<const std::int64_t> q, std::int64_t qn) -> double {
    double Q = static_cast<double>(qn);
    switch (kind) {
      case CriticalKind::s_psi: return ws[0](q) / Q;
      case CriticalKind::s_Psi: {
        double mn = kInf;
        for (double v : ws.values(q)) mn = std::min(mn, v);
        return mn / Q;
      }
      case CriticalKind::tau_psi: return std::pow(ws[0](q), 1.0 / m) / Q;
    }
    return 0;
  };
  auto slope = [&](double s) -> std::optional<double> {
    auto blocks = dyadic_block_sums(inst.n, ws.univariable(), kmax,
                                    [&](std::span<const std::int64_t> q, std::int64_t qn) -> std::optional<double> {
                                      double b = base(q, qn);
                                      if (!(b > 0)) return 0.0;
                                      return std::pow(b, s);
                                    });
    auto fit = fit_growth(blocks);
    if (!fit) return std::nullopt;
    return fit->slope;
  };
  double lo = 0, hi = inst.n * inst.m;
  auto slo = slope(lo), shi = slope(hi);
  if (!slo || !shi || !(*slo > 0) || !(*shi < 0)) return std::nullopt;
  while (hi - lo > tol / 4) {
    double mid = (lo + hi) / 2;
    auto sm = slope(mid);
    if (!sm) return std::nullopt;
    (*sm > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

inline CriticalExponent critical_exponent(CriticalKind kind, const ProblemInstance& inst, bool force_bisection = false,
                                          int kmax = 16) {
  CriticalExponent out;
  if (!force_bisection) {
    if (auto v = detail::critical_symbolic(kind, inst)) {
      out.value = v;
      out.method = "symbolic";
      return out;
    }
  }
  out.value = critical_bisection(kind, inst, kmax);
  out.method = out.value ? "bisection" : "unknown";
  return out;
}

// Smallest s in (lo, hi) at which Σ t_q(Ψ, r^s)|q|^m converges, by bisection
// on the symbolic classification.
inline std::optional<double> weighted_hausdorff_flip(const WeightSystem& ws, double lo, double hi, double tol = 1e-12) {
  auto conv = [&](double s) -> std::optional<bool> {
    auto inst = ProblemInstance::weighted(ws);
    return series_converges_symbolic(
        SeriesDescriptor(SeriesKind::WeightedHausdorff, inst, DimensionFunction::power(s, kInf)));
  };
  auto clo = conv(lo), chi = conv(hi);
  if (!clo || !chi || *clo || !*chi) return std::nullopt;
  while (hi - lo > tol) {
    double mid = (lo + hi) / 2;
    auto c = conv(mid);
    if (!c) return std::nullopt;
    (*c ? hi : lo) = mid;
  }
  return (lo + hi) / 2;
}

// ---------------------------------------------------------------------------
// Φ / ϖ_q construction

struct PhiConstruction {
  std::vector<int> sorted_indices;  // ψ_{i_1} ≤ … ≤ ψ_{i_m}, ties by index
  int k = 0;                        // 1-based k(q)
  double varpi = 0;
  std::vector<double> phi_values;
  double t = 0;
  std::int64_t qnorm = 0;
  std::vector<double> psi_values;
  int n = 1;
};

namespace detail {

// log of (ψ_{i_k}/|q|)^k ∏_{j>k} ψ_{i_j}/|q| for 1-based k.
inline double phi_level_log(const std::vector<double>& lr_sorted, int k) {
  double v = k * lr_sorted[k - 1];
  for (std::size_t j = k; j < lr_sorted.size(); ++j) v += lr_sorted[j];
  return v;
}

}  // namespace detail

inline PhiConstruction phi_construction(const std::vector<double>& psi, int n, std::int64_t qnorm,
                                        const DimensionFunction& f) {
  int m = static_cast<int>(psi.size());
  PhiConstruction pc;
  pc.n = n;
  pc.qnorm = qnorm;
  pc.psi_values = psi;
  auto tq = t_q(psi, n, qnorm, f);
  pc.t = tq.value;
  double lq = std::log(static_cast<double>(qnorm));
  pc.sorted_indices.resize(m);
  std::iota(pc.sorted_indices.begin(), pc.sorted_indices.end(), 0);
  std::stable_sort(pc.sorted_indices.begin(), pc.sorted_indices.end(), [&](int a, int b) { return psi[a] < psi[b]; });
  std::vector<double> lr(m);
  for (int j = 0; j < m; ++j) lr[j] = std::log(psi[pc.sorted_indices[j]]) - lq;
  double lt = tq.log_value;
  double tol = 1e-12 * std::max(1.0, std::abs(lt));
  if (!(lt > detail::phi_level_log(lr, 1) + tol))
    throw Inapplicable("phi_construction: t_q does not exceed the product of ψ_j/|q| at this q");
  int k = 0;
  for (int c = 1; c <= m; ++c)
    if (detail::phi_level_log(lr, c) <= lt + tol) k = c;
  pc.k = k;
  double lv = lt;
  for (int j = k; j < m; ++j) lv -= lr[j];
  pc.varpi = std::exp(lv / k);
  pc.phi_values.assign(m, 0);
  for (int j = 0; j < m; ++j) {
    int idx = pc.sorted_indices[j];
    pc.phi_values[idx] = j < k ? static_cast<double>(qnorm) * pc.varpi : psi[idx];
  }
  return pc;
}

inline PhiConstruction phi_construction(const WeightSystem& ws, const DimensionFunction& f,
                                        std::span<const std::int64_t> q) {
  std::int64_t s = 0;
  for (auto c : q) s = std::max<std::int64_t>(s, std::llabs(c));
  return phi_construction(ws.values(q), ws.n(), s, f);
}

struct PhiChecks {
  bool sandwich = false;
  bool ordering = false;
  bool product = false;
  bool unique = false;
  double product_rel_error = 0;
  bool all() const { return sandwich && ordering && product && unique; }
};

inline PhiChecks check_phi(const PhiConstruction& pc, double rel = 1e-9) {
  PhiChecks c;
  int m = static_cast<int>(pc.psi_values.size());
  double Q = static_cast<double>(pc.qnorm);
  auto r = [&](int j) { return pc.psi_values[pc.sorted_indices[j - 1]] / Q; };  // 1-based
  double eps = 1e-12;
  c.sandwich = r(pc.k) <= pc.varpi * (1 + eps) && (pc.k == m || pc.varpi < r(pc.k + 1) * (1 + eps));
  c.ordering = true;
  for (int j = 1; j < m; ++j) {
    double a = pc.phi_values[pc.sorted_indices[j - 1]], b = pc.phi_values[pc.sorted_indices[j]];
    if (j < pc.k) c.ordering = c.ordering && std::abs(a - b) <= eps * std::max(a, b);
    else if (j == pc.k) c.ordering = c.ordering && a < b * (1 + eps);
    else c.ordering = c.ordering && a <= b * (1 + eps);
  }
  double lp = 0;
  for (double v : pc.phi_values) lp += std::log(v);
  double target = std::log(pc.t) + m * std::log(Q);
  c.product_rel_error = std::abs(std::expm1(lp - target));
  c.product = c.product_rel_error <= rel;
  // uniqueness: every other k fails the level sandwich
  std::vector<double> lr(m);
  for (int j = 0; j < m; ++j) lr[j] = std::log(r(j + 1));
  double lt = std::log(pc.t);
  int holds = 0;
  for (int kk = 1; kk <= m; ++kk) {
    bool left = detail::phi_level_log(lr, kk) <= lt + 1e-12 * std::max(1.0, std::abs(lt));
    bool right = kk == m || lt < detail::phi_level_log(lr, kk + 1) - 1e-12 * std::max(1.0, std::abs(lt));
    if (left && right) ++holds;
  }
  c.unique = holds == 1;
  return c;
}

// ---------------------------------------------------------------------------
// Rectangles feeding the content hypothesis

// ψ_{i_1}/|q|, ϖ×(n-1), …, ψ_{i_k}/|q|, ϖ×(n-1), then ϖ×n(m-k).
inline Rect weighted_rect_sides(const PhiConstruction& pc) {
  int m = static_cast<int>(pc.psi_values.size());
  int n = pc.n;
  std::vector<double> sides;
  for (int j = 0; j < pc.k; ++j) {
    double side = pc.psi_values[pc.sorted_indices[j]] / static_cast<double>(pc.qnorm);
    if (side > pc.varpi * (1 + 1e-12)) throw DomainError("weighted_rect_sides: side exceeds the ball radius");
    sides.push_back(side);
    for (int l = 0; l < n - 1; ++l) sides.push_back(pc.varpi);
  }
  for (int l = 0; l < n * (m - pc.k); ++l) sides.push_back(pc.varpi);
  return Rect(std::move(sides));
}

// (2^{-k_max}/|q|) × (nm-1) then 2^{Σ other k}·ψ/|q|; the last side must stay
// below the others.
inline Rect mult_rect_sides(int n, int m, std::int64_t qnorm, const DyadicIndex& idx, double psi) {
  if (static_cast<int>(idx.k.size()) != m) throw DomainError("mult_rect_sides: index length differs from m");
  int kmax = *std::max_element(idx.k.begin(), idx.k.end());
  int others = std::accumulate(idx.k.begin(), idx.k.end(), 0) - kmax;
  double Q = static_cast<double>(qnorm);
  double big = std::ldexp(1.0, -kmax) / Q;
  double last = std::ldexp(psi, others) / Q;
  if (!(last < big)) throw DomainError("mult_rect_sides: thin side is not below the ball radius");
  std::vector<double> sides(n * m - 1, big);
  sides.push_back(last);
  return Rect(std::move(sides));
}

// ---------------------------------------------------------------------------
// Lattice sums S = Σ_{t≠0, |t_j| ≤ 2/δ_j} |t|^{-s}

struct LatticeSum {
  double value = 0;
  double scale = 0;  // (δ_1⋯δ_{m-k})^{-1} δ_{m-k}^{s-k}
  double ratio = 0;
  int k = 0;
};

inline LatticeSum lattice_sum(std::vector<double> deltas, double s) {
  int m = static_cast<int>(deltas.size());
  if (m < 1) throw DomainError("lattice_sum: need at least one delta");
  if (!(s > 0) || !(s < m)) throw DomainError("lattice_sum: s must lie in (0, m)");
  if (std::abs(s - std::round(s)) < 1e-12) throw DomainError("lattice_sum: s must not be an integer");
  for (double d : deltas)
    if (!(d > 0) || d > 0.5) throw DomainError("lattice_sum: deltas must lie in (0, 1/2]");
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  std::vector<std::int64_t> B(m);
  std::int64_t R = 0;
  for (int j = 0; j < m; ++j) {
    B[j] = static_cast<std::int64_t>(std::floor(2 / deltas[j] + 1e-12));
    R = std::max(R, B[j]);
  }
  auto box = [&](std::int64_t r) {
    double p = 1;
    for (int j = 0; j < m; ++j) p *= static_cast<double>(2 * std::min(r, B[j]) + 1);
    return p;
  };
  LatticeSum out;
  double prev = 1;
  for (std::int64_t r = 1; r <= R; ++r) {
    double cur = box(r);
    out.value += (cur - prev) * std::pow(static_cast<double>(r), -s);
    prev = cur;
  }
  out.k = static_cast<int>(std::floor(s));
  int top = m - out.k;
  double prod = 1;
  for (int j = 0; j < top; ++j) prod *= deltas[j];
  out.scale = std::pow(deltas[top - 1], s - out.k) / prod;
  out.ratio = out.value / out.scale;
  return out;
}

// Brute-force enumeration of the same sum (test oracle, small boxes only).
inline double lattice_sum_brute(const std::vector<double>& deltas, double s) {
  int m = static_cast<int>(deltas.size());
  std::vector<std::int64_t> B(m);
  double cells = 1;
  for (int j = 0; j < m; ++j) {
    B[j] = static_cast<std::int64_t>(std::floor(2 / deltas[j] + 1e-12));
    cells *= 2 * B[j] + 1;
  }
  if (cells > 1e8) throw DomainError("lattice_sum_brute: enumeration budget exceeded");
  std::vector<std::int64_t> t(m);
  for (int j = 0; j < m; ++j) t[j] = -B[j];
  double sum = 0;
  while (true) {
    std::int64_t nrm = 0;
    for (auto v : t) nrm = std::max<std::int64_t>(nrm, std::llabs(v));
    if (nrm > 0) sum += std::pow(static_cast<double>(nrm), -s);
    int j = m - 1;
    while (j >= 0 && t[j] == B[j]) {
      t[j] = -B[j];
      --j;
    }
    if (j < 0) break;
    ++t[j];
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Multiplicative f-volume covers

struct MultCover {
  double exact = 0;  // Σ over A_m(δ) of the per-rectangle cover cost
  double bound_with_log = 0;
  std::optional<double> bound_without_log;
  std::optional<double> logterm_partial;
  std::optional<double> logterm_bound;
  std::optional<double> s;  // the s in f ⪯ nm - 1 + s
};

// Σ_j j^{m-2} x^j for j ≥ 0 (x = 2^{s-1} < 1), in closed form for small m.
inline double logterm_series_bound(int m, double s) {
  double x = std::pow(2.0, s - 1);
  if (m <= 1) return 1 / (1 - x);
  // Σ_j j^p x^j by the Eulerian recursion: apply (x d/dx) p times to 1/(1-x)
  int p = m - 2;
  if (p == 0) return 1 / (1 - x);
  std::vector<double> coef{1.0};  // numerator polynomial A_p(x)
  for (int it = 0; it < p; ++it) {
    int deg = static_cast<int>(coef.size());
    std::vector<double> nc(deg + 1, 0);
    for (int i = 0; i < deg; ++i) {
      nc[i + 1] += coef[i] * (it + 1 - i);  // from x·d/dx of 1/(1-x)^{it+2}
      nc[i] += coef[i] * (i + 1);
    }
    coef = nc;
  }
  double num = 0;
  for (std::size_t i = 0; i < coef.size(); ++i) num += coef[i] * std::pow(x, static_cast<double>(i) + 1);
  return num / std::pow(1 - x, p + 1);
}

inline MultCover mult_cover_fvolume(int n, int m, std::int64_t qnorm, double delta, const DimensionFunction& f,
                                    std::optional<double> s = std::nullopt) {
  if (delta > std::ldexp(1.0, -m)) throw DomainError("mult_cover_fvolume: delta must not exceed 2^-m");
  int nm = n * m;
  int N = dyadic_N(delta);
  double Q = static_cast<double>(qnorm);
  MultCover out;
  for (const auto& idx : dyadic_decompose(m, delta)) {
    int kmax = *std::max_element(idx.k.begin(), idx.k.end());
    double r = std::ldexp(1.0, -kmax) / Q;
    if (r > f.cap()) throw Inapplicable("mult_cover_fvolume: cover radius outside the domain of f");
    out.exact += std::exp(f.log_eval(r) + (1 - nm) * std::log(r) + std::log(Q)) *
                 std::ldexp(1.0, -(N - m - kmax));
  }
  double r0 = delta / Q;
  double base = std::exp(f.log_eval(r0) + (1 - nm) * std::log(r0) + std::log(Q));
  out.bound_with_log = base * std::pow(std::log(1 / delta), m - 1);
  if (!s) {
    if (auto e = f.exponent(); e && f.is_power() && *e > nm - 1 && *e < nm) s = *e - (nm - 1);
  }
  if (s && *s > 0 && *s < 1 && compare(f, nm - 1 + *s).f_precedes_s) {
    out.s = s;
    out.bound_without_log = base;
    double x = std::pow(2.0, *s - 1), part = 0;
    for (int k = 0; k <= N - m; ++k) part += std::pow(static_cast<double>(N - k), m - 2) * std::pow(x, N - k);
    out.logterm_partial = part;
    out.logterm_bound = logterm_series_bound(m, *s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// φ(q) = f(ψ/|q|)(ψ/|q|)^{1-nm}|q|

struct MulhsReduction {
  double phi = 0;
  bool regime_ok = false;   // ψ ≤ |q|^{-1}
  bool phi_ge_psi = false;  // φ ≥ ψ
  bool upper_checked = false;
  bool upper_ok = true;     // φ ≤ ψ^{3/4}|q|^{1/4} when f(r) ≤ r^{nm-1/4}
};

inline MulhsReduction mulhs_reduction(double psi, int n, int m, std::int64_t qnorm, const DimensionFunction& f) {
  if (!(psi > 0)) throw DomainError("mulhs_reduction: psi must be positive");
  int nm = n * m;
  double Q = static_cast<double>(qnorm);
  double r = psi / Q;
  MulhsReduction out;
  double lphi = f.log_eval(r) + (1 - nm) * std::log(r) + std::log(Q);
  out.phi = std::exp(lphi);
  out.regime_ok = psi <= 1 / Q;
  out.phi_ge_psi = lphi >= std::log(psi) - 1e-12;
  if (f.log_eval(r) <= (nm - 0.25) * std::log(r)) {
    out.upper_checked = true;
    out.upper_ok = lphi <= 0.75 * std::log(psi) + 0.25 * std::log(Q) + 1e-12;
  }
  return out;
}

}  // namespace limsup
