#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <json.hpp>

#include "content.hpp"
#include "criteria.hpp"
#include "estimators.hpp"
#include "formulas.hpp"
#include "numtheory.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "resonant.hpp"
#include "rng.hpp"

namespace limsup {

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string suite;
  bool passed = false;
  json measured;
  json expected;
  std::string tolerance;
  std::string detail;
  double seconds = 0;  // kept out of the JSON report
  double budget = 0;
};

inline CriterionResult make_result(int id, std::string name, std::string suite) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.suite = std::move(suite);
  return r;
}

struct Baseline {
  bool ok = false;
  std::string error;
  json data;
};

inline Baseline load_baseline(const std::string& path) {
  Baseline b;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    b.error = "baseline missing: cannot open '" + path + "'";
    return b;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    b.data = json::parse(ss.str());
  } catch (const json::parse_error&) {
    b.error = "baseline missing: '" + path + "' is not valid JSON";
    return b;
  }
  if (!b.data.is_object() || b.data.value("format", "") != "limsup-baseline" || b.data.value("version", 0) != 1 ||
      !b.data.contains("lattice_sum_ratio") || !b.data["lattice_sum_ratio"].is_object()) {
    b.error = "baseline missing: '" + path + "' lacks the expected fields";
    return b;
  }
  b.ok = true;
  return b;
}

struct VerifyOptions {
  std::uint64_t seed = 42;
  std::string filter;  // empty: everything; otherwise a suite name or criterion number
  std::string baseline_path;
};

namespace verify_detail {

inline std::uint64_t seed_for(std::uint64_t seed, int id) { return mix64(seed ^ (0x9e37ULL * static_cast<std::uint64_t>(id))); }

inline bool near_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(b), 1e-300); }

struct RectCase {
  Rect rect;
  DimensionFunction f;
  int k;
};

// 500 rectangles per dimension 1..5, sides log-uniform in [1e-3, 1],
// f = r^s with s = k + u, u in [0.05, 0.95].
inline std::vector<RectCase> rect_corpus(std::uint64_t seed) {
  std::vector<RectCase> out;
  for (int d = 1; d <= 5; ++d) {
    for (int i = 0; i < 500; ++i) {
      CounterRng rng(seed, static_cast<std::uint64_t>(d) * 1000 + i);
      std::vector<double> sides(d);
      for (auto& a : sides) a = rng.log_uniform(1e-3, 1.0);
      int k = static_cast<int>(rng.below(d));
      double s = k + rng.uniform(0.05, 0.95);
      out.push_back({Rect(sides), DimensionFunction::power(s, kInf), k});
    }
  }
  return out;
}

inline CriterionResult c1(std::uint64_t seed) {
  auto r = make_result(1, "rectangle-content argmin equals the bracket index", "content");
  auto corpus = rect_corpus(seed);
  auto bad = parallel_map(corpus.size(), [&](std::size_t i) {
    const auto& c = corpus[i];
    auto est = rect_content_formula(c.rect, c.f);
    return static_cast<int>(est.bracket_k != c.k || est.min_index != est.bracket_k);
  });
  int failures = std::accumulate(bad.begin(), bad.end(), 0);
  r.passed = failures == 0;
  r.measured = {{"rectangles", corpus.size()}, {"failures", failures}};
  r.expected = {{"failures", 0}};
  r.tolerance = "exact";
  r.budget = 5;
  return r;
}

inline CriterionResult c2(std::uint64_t seed) {
  auto r = make_result(2, "content sandwich: greedy cover and mass distribution bounds", "content");
  auto corpus = rect_corpus(seed);
  struct Row {
    double cover_ratio = 0, mdp_ratio = 0;
    int d = 0;
    int ok = 0;
  };
  auto rows = parallel_map(corpus.size(), [&](std::size_t i) {
    const auto& c = corpus[i];
    BallSpec spec;
    spec.count = 400;
    spec.seed = seed + i;
    auto est = content_estimate(c.rect, c.f, spec);
    Row row;
    row.d = c.rect.dim();
    row.cover_ratio = *est.cover_upper / est.formula_value;
    row.mdp_ratio = *est.mdp_lower / est.formula_value;
    double hi = std::pow(4.0, row.d), lo = std::pow(4.0, -row.d);
    row.ok = row.cover_ratio >= 1 - 1e-12 && row.cover_ratio <= hi && row.mdp_ratio >= lo && row.mdp_ratio <= 1 + 1e-12;
    return row;
  });
  json per_d = json::array();
  int failures = 0;
  for (int d = 1; d <= 5; ++d) {
    double cmin = kInf, cmax = 0, mmin = kInf, mmax = 0;
    for (const auto& row : rows) {
      if (row.d != d) continue;
      cmin = std::min(cmin, row.cover_ratio);
      cmax = std::max(cmax, row.cover_ratio);
      mmin = std::min(mmin, row.mdp_ratio);
      mmax = std::max(mmax, row.mdp_ratio);
      failures += !row.ok;
    }
    per_d.push_back({{"d", d}, {"cover_ratio", {cmin, cmax}}, {"mdp_ratio", {mmin, mmax}}});
  }
  r.passed = failures == 0;
  r.measured = {{"failures", failures}, {"ranges", per_d}};
  r.expected = {{"cover_ratio", "[1, 4^d]"}, {"mdp_ratio", "[4^-d, 1]"}};
  r.tolerance = "1e-12 at the unit ends";
  r.budget = 30;
  return r;
}

inline CriterionResult c3() {
  auto r = make_result(3, "dyadic decomposition counts", "resonant");
  int count_fail = 0, ratio_fail = 0;
  double rmin = kInf, rmax = 0, lnmin = kInf, lnmax = 0;
  for (int m = 1; m <= 4; ++m) {
    for (int N = m; N <= 20; ++N) {
      auto idx = dyadic_decompose(m, std::ldexp(1.0, -N));
      if (static_cast<double>(idx.size()) != binomial(N - 1, m - 1)) ++count_fail;
    }
    double fact = std::tgamma(m);
    for (int N = 10 * m; N <= 10 * m + 20; ++N) {
      auto idx = dyadic_decompose(m, std::ldexp(1.0, -N));
      // log base 2 of 1/δ; the natural log would tend to (1/ln 2)^{m-1}
      double ratio = fact * static_cast<double>(idx.size()) / std::pow(static_cast<double>(N), m - 1);
      double ln_ratio = ratio / std::pow(std::log(2.0), m - 1);
      lnmin = std::min(lnmin, ln_ratio);
      lnmax = std::max(lnmax, ln_ratio);
      rmin = std::min(rmin, ratio);
      rmax = std::max(rmax, ratio);
      if (ratio < 0.5 || ratio > 2) ++ratio_fail;
    }
  }
  r.passed = count_fail == 0 && ratio_fail == 0;
  r.measured = {{"count_failures", count_fail}, {"ratio_range", {rmin, rmax}}, {"natural_log_ratio_range", {lnmin, lnmax}}};
  r.expected = {{"count", "C(N-1, m-1)"}, {"ratio", {0.5, 2}}};
  r.tolerance = "exact counts; ratio window";
  r.detail = "ratio uses log base 2; with natural logs it tends to (1/ln 2)^(m-1)";
  r.budget = 1;
  return r;
}

inline CriterionResult c4(std::uint64_t seed) {
  auto r = make_result(4, "multiplicative star measure: closed form vs Monte-Carlo", "resonant");
  int fails = 0;
  double worst = 0;
  json slopes = json::array();
  bool slope_ok = true;
  for (int m : {2, 3}) {
    for (int k = m + 1; k <= 10; ++k) {
      double delta = std::ldexp(1.0, -k);
      auto desc = ResonantDescriptor::mult(LatticePoint::scalar(1), m, delta);
      double exact = measure_exact(desc);
      auto mc = measure_mc(desc, 1000000, seed + static_cast<std::uint64_t>(m * 100 + k));
      double z = std::abs(mc.value - exact) / std::max(mc.std_error, 1e-300);
      worst = std::max(worst, z);
      if (z > 4) ++fails;
    }
    // slope of log(V/δ) against log log(1/δ) deep in the asymptotic range
    std::vector<double> xs, ys;
    for (int k = 100; k <= 1000; k += 50) {
      double delta = std::ldexp(1.0, -k);
      double v = measure_exact(ResonantDescriptor::mult(LatticePoint::scalar(1), m, delta));
      xs.push_back(std::log(k * std::log(2.0)));
      ys.push_back(std::log(v / delta));
    }
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double slope = sxy / sxx;
    std::vector<double> sx, sy;
    for (int k = m + 1; k <= 10; ++k) {
      double delta = std::ldexp(1.0, -k);
      double v = measure_exact(ResonantDescriptor::mult(LatticePoint::scalar(1), m, delta));
      sx.push_back(std::log(k * std::log(2.0)));
      sy.push_back(std::log(v / delta));
    }
    double smx = std::accumulate(sx.begin(), sx.end(), 0.0) / sx.size();
    double smy = std::accumulate(sy.begin(), sy.end(), 0.0) / sy.size();
    double ssxx = 0, ssxy = 0;
    for (std::size_t i = 0; i < sx.size(); ++i) {
      ssxx += (sx[i] - smx) * (sx[i] - smx);
      ssxy += (sx[i] - smx) * (sy[i] - smy);
    }
    slopes.push_back({{"m", m}, {"slope", slope}, {"slope_short_range", ssxy / ssxx}});
    slope_ok = slope_ok && std::abs(slope - (m - 1)) <= 0.1;
  }
  r.passed = fails == 0 && slope_ok;
  r.measured = {{"max_z", worst}, {"failures", fails}, {"slopes", slopes}};
  r.expected = {{"max_z", 4}, {"slope", "m-1"}};
  r.tolerance = "4 standard errors; slope ±0.1";
  r.budget = 60;
  return r;
}

inline CriterionResult c5() {
  auto r = make_result(5, "coprime resonant measure for n = 1", "resonant");
  using Q = boost::rational<long long>;
  int fails = 0;
  double worst = 0;
  for (std::int64_t q = 2; q <= 500; ++q) {
    Q delta(1, q * q);
    auto set = resonant_intervals_1d<Q>(q, delta, true);
    Q got = set.measure();
    Q want = Q(2) * delta * Q(totient(q)) / Q(q);
    double rel = std::abs(boost::rational_cast<double>(got - want)) / boost::rational_cast<double>(want);
    worst = std::max(worst, rel);
    if (rel > 1e-12) ++fails;
  }
  r.passed = fails == 0;
  r.measured = {{"max_relative_error", worst}, {"failures", fails}, {"q_range", {2, 500}}};
  r.expected = "2 delta phi(q)/q";
  r.tolerance = "1e-12 relative";
  r.detail = "q = 1 excluded: delta = 1 there";
  r.budget = 5;
  return r;
}

inline CriterionResult c6(std::uint64_t seed) {
  auto r = make_result(6, "Phi construction invariants", "criteria");
  struct Row {
    int ok = 0;
    double err = 0;
  };
  auto rows = parallel_map(1000, [&](std::size_t i) {
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
      CounterRng rng(seed, i * 64 + attempt);
      int n = 1 + static_cast<int>(rng.below(2));
      int m = 2 + static_cast<int>(rng.below(3));
      std::vector<ApproximatingFunction> comps;
      for (int j = 0; j < m; ++j) comps.push_back(ApproximatingFunction::power(n, rng.uniform(0.1, 3.0)));
      WeightSystem ws(comps);
      auto f = DimensionFunction::power(rng.uniform(0.1, n * m - 0.1), kInf);
      std::vector<std::int64_t> q(n);
      std::int64_t norm = 2 + static_cast<std::int64_t>(rng.below(n == 1 ? 9999 : 999));
      for (auto& c : q) c = static_cast<std::int64_t>(rng.below(2 * norm + 1)) - norm;
      q[rng.below(n)] = rng.below(2) ? norm : -norm;
      try {
        auto pc = phi_construction(ws, f, q);
        auto chk = check_phi(pc, 1e-9);
        return Row{chk.all(), chk.product_rel_error};
      } catch (const Inapplicable&) {
        continue;
      }
    }
    return Row{0, kInf};
  });
  int fails = 0;
  double worst = 0;
  for (const auto& row : rows) {
    fails += !row.ok;
    worst = std::max(worst, row.err);
  }
  auto ws = WeightSystem({ApproximatingFunction::power(1, 1), ApproximatingFunction::power(1, 3)});
  std::int64_t q2[1] = {2};
  auto pc = phi_construction(ws, DimensionFunction::power(1.5), std::span<const std::int64_t>(q2, 1));
  bool worked = pc.k == 2 && near_rel(pc.varpi, 0.25, 1e-12) && near_rel(pc.phi_values[0], 0.5, 1e-12) &&
                near_rel(pc.phi_values[1], 0.5, 1e-12);
  r.passed = fails == 0 && worked;
  r.measured = {{"cases", rows.size()},
                {"failures", fails},
                {"max_product_error", worst},
                {"worked", {{"k", pc.k}, {"varpi", pc.varpi}, {"phi", pc.phi_values}}}};
  r.expected = {{"failures", 0}, {"worked", {{"k", 2}, {"varpi", 0.25}, {"phi", {0.5, 0.5}}}}};
  r.tolerance = "1e-9 relative on the product";
  r.budget = 5;
  return r;
}

inline CriterionResult c7(std::uint64_t seed) {
  auto r = make_result(7, "weighted Hausdorff flip matches the dimension formula", "formulas");
  int checked = 0, skipped = 0, fails = 0;
  double worst = 0;
  for (std::uint64_t i = 0; checked + skipped < 100; ++i) {
    CounterRng rng(seed, i);
    int m = 1 + static_cast<int>(rng.below(4));
    std::vector<double> tau(m);
    std::vector<ApproximatingFunction> comps;
    double total = 0;
    for (auto& t : tau) {
      t = rng.uniform(0.05, 3.0);
      total += t;
      comps.push_back(ApproximatingFunction::power(1, t));
    }
    if (total <= 1) continue;
    double rd = dim_rynne_dickinson(1, m, tau);
    if (std::abs(rd - std::round(rd)) < 1e-6) {
      ++skipped;
      continue;
    }
    ++checked;
    auto flip = weighted_hausdorff_flip(WeightSystem(comps), 1e-9, m - 1e-9);
    double err = flip ? std::abs(*flip - rd) : kInf;
    worst = std::max(worst, err);
    if (err > 1e-3) ++fails;
  }
  auto named = [&](int n, std::vector<double> tau, double want) {
    std::vector<ApproximatingFunction> comps;
    for (double t : tau) comps.push_back(ApproximatingFunction::power(n, t));
    auto inst = ProblemInstance::weighted(WeightSystem(comps));
    auto ce = hausdorff_cost_exponent(inst, 16);
    double got = ce.value.value_or(kInf);
    return json{{"tau", tau}, {"n", n}, {"cost_exponent", num_json(got)}, {"expected", want},
                {"ok", std::abs(got - want) <= 1e-3}};
  };
  json n1 = named(1, {1, 3}, 1.25), n2 = named(1, {2}, 2.0 / 3.0);
  r.passed = fails == 0 && n1["ok"].get<bool>() && n2["ok"].get<bool>();
  r.measured = {{"random_checked", checked}, {"random_skipped_integer", skipped}, {"failures", fails},
                {"max_error", num_json(worst)}, {"named", {n1, n2}}};
  r.expected = "flip exponent = formula value";
  r.tolerance = "1e-3";
  r.budget = 60;
  return r;
}

inline CriterionResult c8() {
  auto r = make_result(8, "Fourier dimension formulas", "formulas");
  auto wsF = WeightSystem({ApproximatingFunction::constant(1, 1), ApproximatingFunction::power(1, 2)});
  auto fw = fourier_dim(ProblemInstance::weighted(wsF));
  auto fm = fourier_dim(ProblemInstance::multiplicative(2, ApproximatingFunction::power(1, 2)));
  double prod = fdim_product({2.0 / 3.0, 2.0}, true);
  bool ok = fw.value && *fw.value == 2.0 / 3.0 && fm.value && *fm.value == 1.0 && prod == 2.0 / 3.0;
  r.passed = ok;
  r.measured = {{"weighted", fw.value ? num_json(*fw.value) : json(fw.reason)},
                {"multiplicative", fm.value ? num_json(*fm.value) : json(fm.reason)},
                {"product", prod}};
  r.expected = {{"weighted", 2.0 / 3.0}, {"multiplicative", 1.0}, {"product", 2.0 / 3.0}};
  r.tolerance = "exact";
  r.budget = 1;
  return r;
}

inline CriterionResult c9(std::uint64_t seed) {
  auto r = make_result(9, "surface measure Fourier coefficients", "estimators");
  LatticePoint q({1, 2});
  double want = std::sqrt(5.0);
  double on_err = 0, off_max = 0;
  for (std::int64_t t : {0, 1, -1, 2, -2}) {
    auto sf = surface_fourier(q, {t, 2 * t});
    on_err = std::max(on_err, std::abs(sf.magnitude - want));
  }
  int off = 0;
  for (std::uint64_t i = 0; off < 20; ++i) {
    CounterRng rng(seed, i);
    std::int64_t k0 = static_cast<std::int64_t>(rng.below(21)) - 10, k1 = static_cast<std::int64_t>(rng.below(21)) - 10;
    if (k1 == 2 * k0) continue;
    ++off;
    off_max = std::max(off_max, surface_fourier(q, {k0, k1}).magnitude);
  }
  r.passed = on_err <= 1e-6 && off_max <= 1e-6;
  r.measured = {{"on_line_max_error", on_err}, {"off_line_max", off_max}, {"off_line_count", off}};
  r.expected = {{"on_line", want}, {"off_line", 0}};
  r.tolerance = "1e-6";
  r.budget = 10;
  return r;
}

inline CriterionResult c10(const Baseline& base) {
  auto r = make_result(10, "lattice sums within frozen bounds", "criteria");
  json ranges = json::object();
  int fails = 0;
  bool missing = false;
  for (int m : {2, 3}) {
    std::vector<double> svals = m == 2 ? std::vector<double>{0.5, 1.5} : std::vector<double>{0.5, 1.5, 2.5};
    for (double s : svals) {
      char key[32];
      std::snprintf(key, sizeof key, "m=%d,s=%.1f", m, s);
      double lo = kInf, hi = 0;
      std::size_t combos = 1;
      for (int j = 0; j < m; ++j) combos *= 7;
      for (std::size_t c = 0; c < combos; ++c) {
        std::vector<double> deltas(m);
        std::size_t x = c;
        for (int j = 0; j < m; ++j) {
          deltas[j] = std::ldexp(1.0, -static_cast<int>(1 + x % 7));  // 2^-1 .. 2^-7
          x /= 7;
        }
        double ratio = lattice_sum(deltas, s).ratio;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      ranges[key] = {lo, hi};
      if (!base.ok || !base.data["lattice_sum_ratio"].contains(key)) {
        missing = true;
        continue;
      }
      auto b = base.data["lattice_sum_ratio"][key];
      if (lo < b[0].get<double>() || hi > b[1].get<double>()) ++fails;
    }
  }
  // geometric tail bound Σ_j j^{m-2} 2^{j(s-1)} at s = 1/2
  int logterm_fail = 0;
  double worst_frac = 0;
  for (int m : {2, 3}) {
    double bound = logterm_series_bound(m, 0.5);
    for (int N = m; N <= 60; ++N) {
      double x = std::pow(2.0, -0.5), part = 0;
      for (int k = 0; k <= N - m; ++k) part += std::pow(static_cast<double>(N - k), m - 2) * std::pow(x, N - k);
      worst_frac = std::max(worst_frac, part / bound);
      if (!(part < bound)) ++logterm_fail;
    }
  }
  r.passed = !missing && fails == 0 && logterm_fail == 0;
  r.measured = {{"ratio_ranges", ranges}, {"bound_failures", fails}, {"logterm_max_fraction", worst_frac},
                {"logterm_failures", logterm_fail}};
  r.expected = base.ok ? json{{"ratio_bounds", base.data["lattice_sum_ratio"]}, {"logterm_fraction", "< 1"}}
                       : json("baseline missing");
  r.tolerance = "frozen bounds";
  if (!base.ok) r.detail = base.error;
  r.budget = 30;
  return r;
}

inline CriterionResult c11(std::uint64_t seed) {
  auto r = make_result(11, "coverage dichotomy and star sandwich", "estimators");
  auto half = ProblemInstance::nonweighted(1, ApproximatingFunction::power(1, 1, 0.5));
  auto sq = ProblemInstance::nonweighted(1, ApproximatingFunction::power(1, 2));
  double cov = coverage_fraction({half, 1, 10000}).value;
  double tail_moment = tail_first_moment(sq, 201, 1000000);
  double tail_cov = coverage_fraction({sq, 201, 10000}).value;
  json sand = json::array();
  std::size_t viol = 0;
  for (int m : {2, 3}) {
    auto rep = sandwich_check(LatticePoint::scalar(5), m, std::ldexp(1.0, -8), 100000, seed + m);
    viol += rep.violations();
    sand.push_back({{"m", m}, {"q", 5}, {"report", to_json(rep)}});
  }
  r.passed = cov >= 0.95 && tail_moment < 0.01 && tail_cov < 0.01 && tail_cov <= tail_moment && viol == 0;
  r.measured = {{"coverage_half_over_q", cov}, {"tail_first_moment", tail_moment}, {"tail_coverage", tail_cov},
                {"sandwich", sand}};
  r.expected = {{"coverage_half_over_q", ">= 0.95"}, {"tail_first_moment", "< 0.01"}, {"tail_coverage", "< 0.01"},
                {"sandwich_violations", 0}};
  r.tolerance = "exact sweep for n = m = 1";
  r.budget = 60;
  return r;
}

inline CriterionResult c12() {
  auto r = make_result(12, "verdict engine on logarithmic thresholds", "formulas");
  auto pl = [](double p) { return ApproximatingFunction::power_log(1, 1, p); };
  VerdictOptions opt;
  opt.kmax = 12;
  auto a = lebesgue_verdict(ProblemInstance::nonweighted(1, pl(-2)), opt);
  auto b = lebesgue_verdict(ProblemInstance::nonweighted(1, pl(-1)), opt);
  auto c = lebesgue_verdict(ProblemInstance::multiplicative(2, pl(-3)), opt);
  auto d = lebesgue_verdict(ProblemInstance::multiplicative(2, pl(-2)), opt);
  r.passed = a.outcome == Outcome::Zero && b.outcome == Outcome::Full && c.outcome == Outcome::Zero &&
             d.outcome == Outcome::Full;
  r.measured = {{"1/(q log^2 q)", to_string(a.outcome)},
                {"1/(q log q)", to_string(b.outcome)},
                {"mult 1/(q log^3 q)", to_string(c.outcome)},
                {"mult 1/(q log^2 q)", to_string(d.outcome)}};
  r.expected = {{"1/(q log^2 q)", "Zero"}, {"1/(q log q)", "Full"}, {"mult 1/(q log^3 q)", "Zero"},
                {"mult 1/(q log^2 q)", "Full"}};
  r.tolerance = "symbolic";
  r.budget = 1;
  return r;
}

inline bool selected(const std::string& filter, int id, const std::string& suite) {
  return filter.empty() || filter == "all" || filter == suite || filter == std::to_string(id);
}

}  // namespace verify_detail

// Criteria 1..12 matching the filter, in order.
inline std::vector<CriterionResult> run_criteria(const VerifyOptions& opt, const Baseline& base) {
  using namespace verify_detail;
  struct Entry {
    int id;
    const char* suite;
    std::function<CriterionResult()> fn;
  };
  std::uint64_t s = opt.seed;
  std::vector<Entry> table = {
      {1, "content", [&] { return c1(seed_for(s, 1)); }},
      {2, "content", [&] { return c2(seed_for(s, 1)); }},
      {3, "resonant", [&] { return c3(); }},
      {4, "resonant", [&] { return c4(seed_for(s, 4)); }},
      {5, "resonant", [&] { return c5(); }},
      {6, "criteria", [&] { return c6(seed_for(s, 6)); }},
      {7, "formulas", [&] { return c7(seed_for(s, 7)); }},
      {8, "formulas", [&] { return c8(); }},
      {9, "estimators", [&] { return c9(seed_for(s, 9)); }},
      {10, "criteria", [&] { return c10(base); }},
      {11, "estimators", [&] { return c11(seed_for(s, 11)); }},
      {12, "formulas", [&] { return c12(); }},
  };
  std::vector<CriterionResult> out;
  for (const auto& e : table) {
    if (!selected(opt.filter, e.id, e.suite)) continue;
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = e.fn();
    } catch (const std::exception& ex) {
      r.id = e.id;
      r.suite = e.suite;
      r.name = "criterion " + std::to_string(e.id);
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.budget > 0 && r.seconds > r.budget) {
      r.passed = false;
      r.detail += (r.detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline json criteria_json(const std::vector<CriterionResult>& rs) {
  json arr = json::array();
  for (const auto& r : rs) {
    json j{{"id", r.id},
           {"name", r.name},
           {"suite", r.suite},
           {"status", r.passed ? "pass" : "fail"},
           {"measured", r.measured},
           {"expected", r.expected},
           {"tolerance", r.tolerance}};
    if (!r.detail.empty()) j["detail"] = r.detail;
    arr.push_back(j);
  }
  return arr;
}

struct VerifyOutcome {
  std::vector<CriterionResult> results;  // includes criterion 13 when selected
  json report;
  bool all_passed = false;
};

// Runs the selected criteria. Criterion 13 reruns 1..12 under 8 and 1
// workers and compares the serialized results byte for byte.
inline VerifyOutcome run_verify(const VerifyOptions& opt) {
  VerifyOutcome out;
  auto base = load_baseline(opt.baseline_path);
  bool want13 = verify_detail::selected(opt.filter, 13, "determinism");
  VerifyOptions inner = opt;
  if (want13 && (opt.filter == "determinism" || opt.filter == "13")) inner.filter = "all";
  unsigned saved = worker_count();
  auto t0 = std::chrono::steady_clock::now();
  if (want13) set_worker_count(8);
  out.results = run_criteria(inner, base);
  if (want13) {
    std::string first = criteria_json(out.results).dump();
    set_worker_count(1);
    auto again = run_criteria(inner, base);
    std::string second = criteria_json(again).dump();
    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto r = make_result(13, "determinism across worker counts", "determinism");
    r.passed = first == second && total < 120;
    r.measured = {{"identical", first == second}, {"runs", 2}, {"workers", {8, 1}}};
    r.expected = {{"identical", true}, {"total_seconds", "< 120"}};
    r.tolerance = "byte-identical";
    if (total >= 120) r.detail = "over time budget";
    r.seconds = total;
    r.budget = 120;
    if (opt.filter == "determinism" || opt.filter == "13") out.results.clear();
    out.results.push_back(r);
  }
  set_worker_count(saved);
  out.all_passed = !out.results.empty() && std::all_of(out.results.begin(), out.results.end(),
                                                       [](const CriterionResult& r) { return r.passed; });
  json summary{{"passed", std::count_if(out.results.begin(), out.results.end(), [](auto& r) { return r.passed; })},
               {"total", out.results.size()}};
  out.report = {{"criteria", criteria_json(out.results)}, {"summary", summary}, {"filter", opt.filter}};
  if (!base.ok) out.report["baseline"] = base.error;
  return out;
}

}  // namespace limsup
