#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "criteria.hpp"
#include "errors.hpp"
#include "funcspace.hpp"
#include "instance.hpp"

namespace limsup {

enum class Outcome { Zero, Full, Inapplicable };

inline std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Zero: return "Zero";
    case Outcome::Full: return "Full";
    case Outcome::Inapplicable: return "Inapplicable";
  }
  return "?";
}

enum class Theorem {
  KhintchineGroshev,   // Σ ψ^m, nonweighted Lebesgue
  Schmidt,             // Σ ∏ψ_j, weighted Lebesgue
  Gallagher,           // Σ ψ log^{m-1}(1/ψ), multiplicative Lebesgue
  Jarnik,              // nonweighted Hausdorff
  WeightedHausdorff,   // Σ t_q |q|^m
  MultHausdorff,       // (n-1)m ≺ f ⪯ nm-1+s
  MultHausdorffLog,    // (nm-1) ⪯ f ≺ nm with the regularity condition
  HussainSimmons,      // n = 1 multiplicative, f = r^s with s in (m-1, m)
  None
};

inline std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::KhintchineGroshev: return "khintchine-groshev";
    case Theorem::Schmidt: return "schmidt";
    case Theorem::Gallagher: return "gallagher";
    case Theorem::Jarnik: return "jarnik";
    case Theorem::WeightedHausdorff: return "weighted-hausdorff";
    case Theorem::MultHausdorff: return "mult-hausdorff";
    case Theorem::MultHausdorffLog: return "mult-hausdorff-log";
    case Theorem::HussainSimmons: return "hussain-simmons";
    case Theorem::None: return "none";
  }
  return "?";
}

struct Hypothesis {
  enum class Status { pass, fail, untested };
  std::string name;
  Status status = Status::untested;
  std::string detail;
};

inline std::string to_string(Hypothesis::Status s) {
  switch (s) {
    case Hypothesis::Status::pass: return "pass";
    case Hypothesis::Status::fail: return "fail";
    case Hypothesis::Status::untested: return "untested";
  }
  return "?";
}

struct Verdict {
  Outcome outcome = Outcome::Inapplicable;
  std::string reason;
  std::optional<Outcome> would_be;
  Theorem theorem = Theorem::None;
  std::string measure;  // what Zero/Full refers to
  std::vector<Hypothesis> audit;
  std::optional<SeriesEstimate> series;
  std::optional<SeriesKind> series_kind;

  bool all_pass() const {
    return std::all_of(audit.begin(), audit.end(),
                       [](const Hypothesis& h) { return h.status != Hypothesis::Status::fail; });
  }
};

struct VerdictOptions {
  int kmax = 12;
  bool with_series = true;
  std::int64_t monotone_qmax = 1 << 12;
};

namespace detail {

inline Hypothesis hyp(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok ? Hypothesis::Status::pass : Hypothesis::Status::fail, std::move(detail)};
}

inline Hypothesis hyp_untested(std::string name, std::string detail = {}) {
  return {std::move(name), Hypothesis::Status::untested, std::move(detail)};
}

inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline bool psi_non_increasing(const WeightSystem& ws, std::int64_t qmax) {
  for (const auto& c : ws.components()) {
    if (c.non_increasing()) continue;
    if (!c.univariable()) return false;
    if (!check_non_increasing(c, std::min(qmax, c.max_norm()))) return false;
  }
  return true;
}

// Fills outcome from the series classification once hypotheses are audited.
// Hypotheses marked divergence_only apply only when the series diverges.
inline void finish(Verdict& v, const SeriesDescriptor& desc, const VerdictOptions& opt,
                   const std::vector<Hypothesis>& divergence_only = {}) {
  v.series_kind = desc.kind;
  Classification cls;
  if (opt.with_series) {
    v.series = series_sum(desc, opt.kmax);
    cls = v.series->classification;
  } else if (auto c = series_converges_symbolic(desc)) {
    cls = *c ? Classification::ConvergesSymbolic : Classification::DivergesSymbolic;
  } else {
    cls = Classification::Unknown;
  }
  if (cls == Classification::Unknown) {
    v.outcome = Outcome::Inapplicable;
    v.reason = "series classification unknown";
    return;
  }
  bool conv = converges(cls);
  if (!conv)
    for (const auto& h : divergence_only) v.audit.push_back(h);
  else
    for (const auto& h : divergence_only) v.audit.push_back({h.name, Hypothesis::Status::untested, "divergence part only"});
  Outcome would = conv ? Outcome::Zero : Outcome::Full;
  if (!v.all_pass()) {
    v.outcome = Outcome::Inapplicable;
    v.reason = "hypothesis failed";
    for (const auto& h : v.audit)
      if (h.status == Hypothesis::Status::fail) v.reason += ": " + h.name;
    return;
  }
  if (!is_symbolic(cls)) {
    v.outcome = Outcome::Inapplicable;
    v.reason = "heuristic";
    v.would_be = would;
    return;
  }
  v.outcome = would;
}

inline Verdict inapplicable(Theorem t, std::string reason, std::vector<Hypothesis> audit = {}) {
  Verdict v;
  v.theorem = t;
  v.reason = std::move(reason);
  v.audit = std::move(audit);
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Lebesgue measure

inline Verdict lebesgue_verdict(const ProblemInstance& inst, const VerdictOptions& opt = {}) {
  int n = inst.n, m = inst.m, nm = n * m;
  Verdict v;
  v.measure = "Lebesgue";
  auto ws = inst.psi_system();
  switch (inst.mode) {
    case Mode::nonweighted: {
      v.theorem = Theorem::KhintchineGroshev;
      std::vector<Hypothesis> div;
      if (nm == 1)
        div.push_back(detail::hyp("psi non-increasing", detail::psi_non_increasing(ws, opt.monotone_qmax),
                                  "required for divergence when nm = 1"));
      else
        v.audit.push_back(detail::hyp("nm > 1 (monotonicity not needed)", true));
      detail::finish(v, SeriesDescriptor(SeriesKind::KG, inst), opt, div);
      return v;
    }
    case Mode::weighted: {
      v.theorem = Theorem::Schmidt;
      std::vector<Hypothesis> div;
      bool univ = n >= 2 && ws.univariable();
      if (univ) {
        div.push_back(detail::hyp("n >= 2 and univariable", true));
      } else {
        // near monotone shell sums: q1^α S_{q1} ≫ q2^α S_{q2}
        double alpha = 0;
        if (ws.symbolic()) {
          double tsum = 0;
          for (const auto& c : ws.components()) tsum += c.asymptotic()->first;
          alpha = tsum - (n - 1);
        }
        std::int64_t qmax = std::min<std::int64_t>(ws.max_norm(), n == 1 ? opt.monotone_qmax : 256);
        auto nmc = near_monotone_constant(ws, alpha, qmax);
        bool ok = !nmc.degenerate && nmc.c >= 0.01;
        div.push_back(detail::hyp("near-monotone shell sums", ok,
                                  "alpha=" + detail::fmt(alpha) + " c=" + detail::fmt(nmc.c) + " up to |q|=" +
                                      std::to_string(qmax)));
      }
      detail::finish(v, SeriesDescriptor(SeriesKind::Weighted, inst), opt, div);
      return v;
    }
    case Mode::multiplicative: {
      v.theorem = Theorem::Gallagher;
      v.audit.push_back(detail::hyp("psi non-increasing", detail::psi_non_increasing(ws, opt.monotone_qmax)));
      detail::finish(v, SeriesDescriptor(SeriesKind::MultLebesgue, inst), opt);
      return v;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Hausdorff measure

namespace detail {

// Smallest s in (0,1) with f ⪯ nm - 1 + s, if any.
inline std::optional<double> mult_bracket_s(const DimensionFunction& f, int nm) {
  double hi = 1 - 1e-9;
  if (!compare(f, nm - 1 + hi).f_precedes_s) return std::nullopt;
  double lo = 1e-9;
  if (compare(f, nm - 1 + lo).f_precedes_s) return lo;
  for (int it = 0; it < 60; ++it) {
    double mid = (lo + hi) / 2;
    (compare(f, nm - 1 + mid).f_precedes_s ? hi : lo) = mid;
  }
  return hi;
}

inline bool regularity_ok(const DimensionFunction& f, int nm, std::string* detail) {
  bool ok = true;
  std::string d;
  for (double t : {0.25, 0.5, 0.75}) {
    auto b = regularity_check(f, nm, t);
    bool good = b.lo >= 0.05 && b.hi <= 20;
    ok = ok && good;
    d += "t=" + fmt(t) + ":[" + fmt(b.lo) + "," + fmt(b.hi) + "] ";
  }
  if (detail) *detail = d;
  return ok;
}

inline Verdict jarnik_verdict(const ProblemInstance& inst, const DimensionFunction& f, const VerdictOptions& opt,
                              SeriesKind kind) {
  int n = inst.n, m = inst.m, nm = n * m;
  Verdict v;
  v.theorem = Theorem::Jarnik;
  v.measure = "H^f";
  auto ws = inst.psi_system();
  v.audit.push_back(hyp("(n-1)m ≺ f", compare(f, (n - 1) * m).s_strictly_precedes_f));
  v.audit.push_back(hyp("f ⪯ nm", compare(f, nm).f_precedes_s));
  v.audit.push_back(hyp("psi univariable", ws.univariable()));
  if (nm == 1) v.audit.push_back(hyp("psi non-increasing", psi_non_increasing(ws, opt.monotone_qmax), "nm = 1"));
  if (!v.all_pass()) {
    v.reason = "hypothesis failed";
    return v;
  }
  finish(v, SeriesDescriptor(kind, inst, f), opt);
  return v;
}

inline Verdict weighted_hausdorff_verdict(const ProblemInstance& inst, const DimensionFunction& f,
                                          const VerdictOptions& opt) {
  int n = inst.n, m = inst.m, nm = n * m;
  Verdict v;
  v.theorem = Theorem::WeightedHausdorff;
  v.measure = "H^f";
  auto ws = inst.psi_system();
  v.audit.push_back(hyp("f ≺ nm", compare(f, nm).f_strictly_precedes_s));
  auto k = integer_bracket(f, nm - m + 1, nm - 1);
  v.audit.push_back(hyp("(nm-a) ⪯ f ⪯ (nm-a+1), 1 <= a <= m-1", k.has_value(),
                        k ? "a=" + std::to_string(nm - *k) : std::string("no bracket")));
  bool c1 = n >= 2 && ws.univariable();
  bool c2 = psi_non_increasing(ws, opt.monotone_qmax);
  v.audit.push_back(hyp("n >= 2 and univariable, or non-increasing", c1 || c2));
  if (!v.all_pass()) {
    v.reason = "hypothesis failed";
    return v;
  }
  finish(v, SeriesDescriptor(SeriesKind::WeightedHausdorff, inst, f), opt);
  return v;
}

inline Verdict mult_hausdorff_verdict(const ProblemInstance& inst, const DimensionFunction& f,
                                      const VerdictOptions& opt) {
  int n = inst.n, m = inst.m, nm = n * m;
  Verdict v;
  v.theorem = Theorem::MultHausdorff;
  v.measure = "H^f";
  auto ws = inst.psi_system();
  v.audit.push_back(hyp("n > 1 and m > 1", n > 1 && m > 1));
  v.audit.push_back(hyp("(n-1)m ≺ f", compare(f, (n - 1) * m).s_strictly_precedes_f));
  auto s = mult_bracket_s(f, nm);
  v.audit.push_back(hyp("f ⪯ nm-1+s for some s in (0,1)", s.has_value(), s ? "s=" + fmt(*s) : std::string()));
  v.audit.push_back(hyp("psi non-increasing", psi_non_increasing(ws, opt.monotone_qmax)));
  if (!v.all_pass()) {
    v.reason = "hypothesis failed";
    return v;
  }
  finish(v, SeriesDescriptor(SeriesKind::MultHausdorff, inst, f), opt);
  return v;
}

inline Verdict mult_hausdorff_log_verdict(const ProblemInstance& inst, const DimensionFunction& f,
                                          const VerdictOptions& opt) {
  int n = inst.n, m = inst.m, nm = n * m;
  Verdict v;
  v.theorem = Theorem::MultHausdorffLog;
  v.measure = "H^f";
  auto ws = inst.psi_system();
  v.audit.push_back(hyp("n > 1 and m > 1", n > 1 && m > 1));
  v.audit.push_back(hyp("(nm-1) ⪯ f", compare(f, nm - 1).s_precedes_f));
  v.audit.push_back(hyp("f ≺ nm", compare(f, nm).f_strictly_precedes_s));
  std::string rd;
  bool reg = regularity_ok(f, nm, &rd);
  v.audit.push_back(hyp("f(αr)/f(r) ≍ α^nm", reg, rd));
  v.audit.push_back(hyp("psi non-increasing", psi_non_increasing(ws, opt.monotone_qmax)));
  if (!v.all_pass()) {
    v.reason = "hypothesis failed";
    return v;
  }
  finish(v, SeriesDescriptor(SeriesKind::MultHausdorffLog, inst, f), opt);
  return v;
}

inline Verdict hussain_simmons_verdict(const ProblemInstance& inst, const DimensionFunction& f,
                                       const VerdictOptions& opt) {
  int m = inst.m;
  Verdict v;
  v.theorem = Theorem::HussainSimmons;
  v.measure = "H^f";
  auto ws = inst.psi_system();
  v.audit.push_back(hyp("n = 1", inst.n == 1));
  auto e = f.exponent();
  bool power = f.is_power() && e && *e > m - 1 && *e < m;
  v.audit.push_back(hyp("f = r^s with m-1 < s < m", power));
  v.audit.push_back(hyp("psi non-increasing", psi_non_increasing(ws, opt.monotone_qmax)));
  if (!v.all_pass()) {
    v.reason = "hypothesis failed";
    return v;
  }
  finish(v, SeriesDescriptor(SeriesKind::MultHausdorff, inst, f), opt);
  return v;
}

}  // namespace detail

// Every theorem whose hypotheses pass for this instance.
inline std::vector<Verdict> hausdorff_verdicts_all(const ProblemInstance& inst, const DimensionFunction& f,
                                                   const VerdictOptions& opt = {}) {
  std::vector<Verdict> out;
  switch (inst.mode) {
    case Mode::nonweighted:
      out.push_back(detail::jarnik_verdict(inst, f, opt, SeriesKind::Jarnik));
      break;
    case Mode::weighted:
      if (inst.m == 1) out.push_back(detail::jarnik_verdict(inst, f, opt, SeriesKind::Jarnik));
      else out.push_back(detail::weighted_hausdorff_verdict(inst, f, opt));
      break;
    case Mode::multiplicative:
      if (inst.m == 1) {
        out.push_back(detail::jarnik_verdict(inst, f, opt, SeriesKind::MultHausdorff));
      } else if (inst.n == 1) {
        out.push_back(detail::hussain_simmons_verdict(inst, f, opt));
      } else {
        out.push_back(detail::mult_hausdorff_verdict(inst, f, opt));
        out.push_back(detail::mult_hausdorff_log_verdict(inst, f, opt));
      }
      break;
  }
  return out;
}

inline Verdict hausdorff_verdict(const ProblemInstance& inst, const DimensionFunction& f,
                                 const VerdictOptions& opt = {}) {
  auto all = hausdorff_verdicts_all(inst, f, opt);
  for (auto& v : all)
    if (v.all_pass()) return v;
  Verdict v = all.front();
  if (all.size() > 1) {
    v.theorem = Theorem::None;
    v.audit.clear();
    for (const auto& a : all)
      for (const auto& h : a.audit) v.audit.push_back({to_string(a.theorem) + ": " + h.name, h.status, h.detail});
  }
  v.outcome = Outcome::Inapplicable;
  v.reason = "f fails every applicable bracket";
  return v;
}

inline Verdict hausdorff_verdict(const ProblemInstance& inst, const VerdictOptions& opt = {}) {
  if (!inst.f) throw DomainError("hausdorff_verdict: instance has no dimension function");
  return hausdorff_verdict(inst, *inst.f, opt);
}

// ---------------------------------------------------------------------------
// Dimension formulas

inline double dim_rynne_dickinson(int n, int m, const std::vector<double>& tau) {
  if (n < 1 || m < 1 || static_cast<int>(tau.size()) != m) throw DomainError("dim_rynne_dickinson: need m exponents");
  double total = 0;
  for (double t : tau) {
    if (!(t > 0) || !std::isfinite(t)) throw DomainError("dim_rynne_dickinson: exponents must be positive and finite");
    total += t;
  }
  if (total <= n) throw Inapplicable("dim_rynne_dickinson: sum of exponents <= n (full measure)");
  double best = kInf;
  for (int i = 0; i < m; ++i) {
    double num = m + n;
    for (int j = 0; j < m; ++j)
      if (tau[j] < tau[i]) num += tau[i] - tau[j];
    best = std::min(best, num / (1 + tau[i]));
  }
  return (n - 1) * m + best;
}

struct TauSpectrum {
  std::vector<std::vector<double>> points;

  explicit TauSpectrum(std::vector<std::vector<double>> pts) : points(std::move(pts)) {
    if (points.empty()) throw DomainError("TauSpectrum: empty");
    for (const auto& p : points) {
      if (p.size() != points.front().size() || p.empty()) throw DomainError("TauSpectrum: inconsistent arity");
      for (double t : p)
        if (!(t > 0)) throw DomainError("TauSpectrum: coordinates must be positive or infinite");
    }
  }
  int m() const { return static_cast<int>(points.front().size()); }
};

// Limit point of -log ψ_j(q)/log q for power-type components.
inline TauSpectrum tau_spectrum_of(const WeightSystem& ws) {
  std::vector<double> p;
  for (const auto& c : ws.components()) {
    if (std::holds_alternative<ConstantApprox>(c.kind()) && c.coefficient() == 0) {
      p.push_back(kInf);
      continue;
    }
    auto a = c.asymptotic();
    if (!a) throw Inapplicable("tau_spectrum_of: component has no symbolic asymptotic");
    if (!(a->first > 0)) throw Inapplicable("tau_spectrum_of: exponent must be positive");
    p.push_back(a->first);
  }
  return TauSpectrum({p});
}

// sup over τ of min(min_{i∈L(τ)} (m+1+Σ_{τ_j<τ_i}(τ_i-τ_j))/(1+τ_i), #L(τ));
// an all-infinite point contributes 0.
inline double dim_wang_wu(int m, const TauSpectrum& spec) {
  if (spec.m() != m) throw DomainError("dim_wang_wu: spectrum arity differs from m");
  double best = 0;
  for (const auto& tau : spec.points) {
    double inner = kInf;
    int L = 0;
    for (int i = 0; i < m; ++i) {
      if (std::isinf(tau[i])) continue;
      ++L;
      double num = m + 1;
      for (int j = 0; j < m; ++j)
        if (tau[j] < tau[i]) num += tau[i] - tau[j];
      inner = std::min(inner, num / (1 + tau[i]));
    }
    best = std::max(best, std::min(inner, static_cast<double>(L)));
  }
  return best;
}

struct FourierDim {
  std::optional<double> value;
  std::string reason;
  std::vector<Hypothesis> audit;
  std::string method;
};

inline FourierDim fourier_dim(const ProblemInstance& inst) {
  FourierDim out;
  SeriesKind kind = inst.mode == Mode::weighted       ? SeriesKind::Weighted
                    : inst.mode == Mode::nonweighted ? SeriesKind::KG
                                                     : SeriesKind::MultLebesgue;
  auto conv = series_converges_symbolic(SeriesDescriptor(kind, inst));
  std::string name = inst.mode == Mode::weighted       ? "Σ ∏ψ_j < ∞"
                     : inst.mode == Mode::nonweighted ? "Σ ψ^m < ∞"
                                                      : "Σ ψ log^{m-1}(1/ψ) < ∞";
  if (!conv) out.audit.push_back(detail::hyp_untested(name, "not symbolic"));
  else out.audit.push_back(detail::hyp(name, *conv));
  CriticalKind ck = inst.mode == Mode::weighted       ? CriticalKind::s_Psi
                    : inst.mode == Mode::nonweighted ? CriticalKind::s_psi
                                                     : CriticalKind::tau_psi;
  auto ce = critical_exponent(ck, inst);
  out.method = ce.method;
  if (inst.mode == Mode::weighted) {
    if (ce.value) out.audit.push_back(detail::hyp("s(Ψ) < 1", *ce.value < 1, "s(Ψ)=" + detail::fmt(*ce.value)));
    else out.audit.push_back(detail::hyp_untested("s(Ψ) < 1", "critical exponent unknown"));
  }
  for (const auto& h : out.audit) {
    if (h.status != Hypothesis::Status::pass) {
      out.reason = "hypothesis " + to_string(h.status) + ": " + h.name;
      return out;
    }
  }
  if (!ce.value) {
    out.reason = "critical exponent unknown";
    return out;
  }
  out.value = 2 * *ce.value;
  return out;
}

inline double fdim_product(const std::vector<double>& fdims, bool null_measure) {
  if (!null_measure) throw Inapplicable("fdim_product: product may have positive measure");
  if (fdims.empty()) throw DomainError("fdim_product: no factors");
  return *std::min_element(fdims.begin(), fdims.end());
}

// min over ℓ of hdim_ℓ + Σ_{j≠ℓ} ambient_j.
inline double hdim_product(const std::vector<std::pair<double, int>>& factors) {
  if (factors.empty()) throw DomainError("hdim_product: no factors");
  double total = 0;
  for (const auto& [h, d] : factors) total += d;
  double best = kInf;
  for (const auto& [h, d] : factors) best = std::min(best, h + total - d);
  return best;
}

}  // namespace limsup
