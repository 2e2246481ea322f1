// limsup-lab: command-line front end over the limsup headers.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "limsup/limsup.hpp"

#ifndef LIMSUP_BASELINE_PATH
#define LIMSUP_BASELINE_PATH "data/baseline.json"
#endif

using namespace limsup;

namespace {

enum Exit { kOk = 0, kVerifyFail = 1, kConfigError = 2, kInvariant = 3 };

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<int> kmax;
  std::string out;
  std::string format = "json";
  std::string suite;
  std::string baseline = LIMSUP_BASELINE_PATH;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string cell(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return os.str();
}

struct Output {
  json results;
  Table table;
  int code = kOk;
};

// Loads the config and applies flag overrides.
InstanceConfig load(const Flags& fl) {
  if (fl.config.empty()) throw ConfigError("--config is required for this subcommand");
  auto cfg = load_config(fl.config);
  if (fl.seed) cfg.run.seed = *fl.seed;
  if (fl.samples) {
    if (*fl.samples < 1) throw ConfigError("--samples: must be positive");
    cfg.run.samples = *fl.samples;
  }
  if (fl.kmax) {
    if (*fl.kmax < 1 || *fl.kmax > 30) throw ConfigError("--Kmax: must lie in [1, 30]");
    cfg.run.kmax = *fl.kmax;
  }
  return cfg;
}

json run_json(const RunConfig& r) {
  json j{{"Kmax", r.kmax}, {"Qlo", r.qlo}, {"Qmax", r.qmax}, {"samples", r.samples}, {"seed", r.seed}};
  if (r.delta) j["delta"] = *r.delta;
  if (r.q) j["q"] = *r.q;
  if (r.tolerance) j["tolerance"] = *r.tolerance;
  return j;
}

LatticePoint point_of(const InstanceConfig& cfg) {
  int n = cfg.instance.n;
  if (cfg.run.q) {
    if (static_cast<int>(cfg.run.q->size()) != n) throw ConfigError("run.q: expected n coordinates");
    return LatticePoint(*cfg.run.q);
  }
  std::vector<std::int64_t> q(n, 0);
  q[0] = 1;
  return LatticePoint(q);
}

VerdictOptions verdict_options(const RunConfig& r) {
  VerdictOptions opt;
  opt.kmax = r.kmax;
  return opt;
}

// ---------------------------------------------------------------------------

Output cmd_criteria(const InstanceConfig& cfg) {
  const auto& inst = cfg.instance;
  std::vector<SeriesKind> kinds;
  switch (inst.mode) {
    case Mode::nonweighted:
      kinds = {SeriesKind::KG, SeriesKind::Weighted};
      if (inst.f) kinds.insert(kinds.end(), {SeriesKind::Jarnik, SeriesKind::WeightedHausdorff});
      break;
    case Mode::weighted:
      kinds = {SeriesKind::Weighted};
      if (inst.f) kinds.push_back(SeriesKind::WeightedHausdorff);
      break;
    case Mode::multiplicative:
      kinds = {SeriesKind::MultLebesgue};
      if (inst.f) kinds.insert(kinds.end(), {SeriesKind::MultHausdorff, SeriesKind::MultHausdorffLog});
      break;
  }
  Output out;
  out.table.header = {"kind", "k", "block_sum", "cumulative"};
  json series = json::array();
  for (auto kind : kinds) {
    json e{{"kind", to_string(kind)}};
    try {
      auto est = series_sum(SeriesDescriptor(kind, inst), cfg.run.kmax);
      e["estimate"] = to_json(est);
      double cum = 0;
      for (auto [k, v] : est.block_sums) {
        cum += v;
        out.table.rows.push_back({to_string(kind), std::to_string(k), cell(v), cell(cum)});
      }
    } catch (const DomainError& ex) {
      e["reason"] = ex.what();
    } catch (const Inapplicable& ex) {
      e["reason"] = ex.what();
    }
    series.push_back(e);
  }
  auto opt = verdict_options(cfg.run);
  json verdicts{{"lebesgue", to_json(lebesgue_verdict(inst, opt))}};
  if (inst.f) {
    json all = json::array();
    for (const auto& v : hausdorff_verdicts_all(inst, *inst.f, opt)) all.push_back(to_json(v));
    verdicts["hausdorff"] = to_json(hausdorff_verdict(inst, *inst.f, opt));
    verdicts["hausdorff_candidates"] = all;
  }
  out.results = {{"run", run_json(cfg.run)}, {"series", series}, {"verdicts", verdicts}};
  if (inst.mode != Mode::multiplicative) {
    auto ws = inst.psi_system();
    if (ws.symbolic()) {
      auto flip = weighted_hausdorff_flip(ws, 1e-9, inst.d() - 1e-9);
      out.results["flip_exponent"] = flip ? json(*flip) : json("no flip in (0, nm)");
    } else {
      out.results["flip_exponent"] = "not symbolic";
    }
  }
  return out;
}

Output cmd_dims(const InstanceConfig& cfg) {
  const auto& inst = cfg.instance;
  auto ws = inst.psi_system();
  Output out;
  out.table.header = {"quantity", "value", "method"};
  json dims = json::object();
  auto put = [&](const std::string& name, std::optional<double> v, const std::string& method, const std::string& why) {
    if (v) {
      dims[name] = {{"value", num_json(*v)}, {"method", method}};
      out.table.rows.push_back({name, cell(*v), method});
    } else {
      dims[name] = {{"reason", why}, {"method", method}};
      out.table.rows.push_back({name, "", why});
    }
  };
  if (inst.mode != Mode::multiplicative) {
    std::vector<double> tau;
    bool pure = ws.symbolic();
    if (pure)
      for (const auto& c : ws.components()) tau.push_back(c.asymptotic()->first);
    if (pure) {
      try {
        put("rynne_dickinson", dim_rynne_dickinson(inst.n, inst.m, tau), "closed form", "");
      } catch (const Inapplicable& e) {
        put("rynne_dickinson", inst.d(), "full measure", "");
        dims["rynne_dickinson"]["detail"] = e.what();
      } catch (const DomainError& e) {
        put("rynne_dickinson", std::nullopt, "closed form", e.what());
      }
      if (inst.n == 1) {
        try {
          put("wang_wu", dim_wang_wu(inst.m, tau_spectrum_of(ws)), "closed form", "");
        } catch (const std::exception& e) {
          put("wang_wu", std::nullopt, "closed form", e.what());
        }
      }
      auto flip = weighted_hausdorff_flip(ws, 1e-9, inst.d() - 1e-9);
      put("series_flip", flip, "symbolic bisection", "no flip in (0, nm)");
    } else {
      put("rynne_dickinson", std::nullopt, "closed form", "psi has no symbolic power asymptotic");
    }
    try {
      auto ce = hausdorff_cost_exponent(inst, cfg.run.kmax);
      put("cost_exponent", ce.value, ce.method, ce.method);
    } catch (const std::exception& e) {
      put("cost_exponent", std::nullopt, "block-growth bisection", e.what());
    }
  }
  const std::pair<CriticalKind, const char*> crit[] = {
      {CriticalKind::s_psi, "s_psi"}, {CriticalKind::s_Psi, "s_Psi"}, {CriticalKind::tau_psi, "tau_psi"}};
  for (auto [kind, name] : crit) {
    if (!ws.symbolic() && inst.n > 1) {
      put(name, std::nullopt, "unknown", "bisection limited to n = 1 for non-symbolic psi");
      continue;
    }
    auto ce = critical_exponent(kind, inst, false, cfg.run.kmax);
    put(name, ce.value, ce.method, "no sign change");
  }
  if (inst.f) dims["hausdorff_verdict"] = to_json(hausdorff_verdict(inst, *inst.f, verdict_options(cfg.run)));
  out.results = {{"run", run_json(cfg.run)}, {"dimensions", dims}};
  return out;
}

Output cmd_fourier(const InstanceConfig& cfg) {
  const auto& inst = cfg.instance;
  Output out;
  out.table.header = {"quantity", "value"};
  auto fd = fourier_dim(inst);
  out.results = {{"run", run_json(cfg.run)}, {"fourier_dim", to_json(fd)}};
  out.table.rows.push_back({"fourier_dim", fd.value ? cell(*fd.value) : fd.reason});
  if (cfg.run.q && inst.n <= 2) {
    auto q = point_of(cfg);
    json coeffs = json::array();
    for (std::int64_t t = 0; t <= 2; ++t) {
      std::vector<std::int64_t> k;
      for (auto c : q.coords) k.push_back(t * c);
      auto sf = surface_fourier(q, k);
      coeffs.push_back({{"k", k}, {"magnitude", sf.magnitude}, {"error_estimate", sf.error_estimate},
                        {"flagged", sf.flagged}});
      out.table.rows.push_back({"surface_fourier_t" + std::to_string(t), cell(sf.magnitude)});
    }
    out.results["surface_fourier"] = coeffs;
  }
  return out;
}

Output cmd_measure(const InstanceConfig& cfg) {
  const auto& inst = cfg.instance;
  auto q = point_of(cfg);
  auto ws = inst.psi_system();
  Output out;
  out.table.header = {"quantity", "value", "uncertainty"};
  ResonantDescriptor desc;
  json bound;
  if (inst.mode == Mode::multiplicative) {
    double delta = cfg.run.delta.value_or(inst.single()(q));
    desc = ResonantDescriptor::mult(q, inst.m, delta);
    try {
      auto mb = measure_bound_check_mult(nullptr, q, inst.m, delta);
      bound = {{"lhs", num_json(mb.lhs)}, {"rhs", num_json(mb.rhs)}, {"ratio", num_json(mb.ratio)}};
    } catch (const std::exception& e) {
      bound = {{"reason", e.what()}};
    }
  } else {
    auto deltas = ws.values(std::span<const std::int64_t>(q.coords));
    if (cfg.run.delta) std::fill(deltas.begin(), deltas.end(), *cfg.run.delta);
    desc = ResonantDescriptor::weighted(q, deltas);
    try {
      auto mb = measure_bound_check(nullptr, q, deltas);
      bound = {{"lhs", num_json(mb.lhs)}, {"rhs", num_json(mb.rhs)}, {"ratio", num_json(mb.ratio)}};
    } catch (const std::exception& e) {
      bound = {{"reason", e.what()}};
    }
  }
  double exact = measure_exact(desc);
  auto mc = measure_mc(desc, cfg.run.samples, cfg.run.seed);
  out.results = {{"run", run_json(cfg.run)},
                 {"q", q.coords},
                 {"variant", to_string(desc.variant)},
                 {"deltas", desc.deltas},
                 {"exact", num_json(exact)},
                 {"monte_carlo", {{"value", mc.value}, {"std_error", mc.std_error}, {"samples", mc.samples}, {"seed", mc.seed}}},
                 {"lebesgue_bound", bound}};
  out.table.rows.push_back({"exact", cell(exact), "0"});
  out.table.rows.push_back({"monte_carlo", cell(mc.value), cell(mc.std_error)});
  return out;
}

Output cmd_decompose(const InstanceConfig& cfg) {
  const auto& inst = cfg.instance;
  auto q = point_of(cfg);
  double delta = cfg.run.delta.value_or(inst.single()(q));
  if (!(delta > 0) || delta > 1) throw ConfigError("decompose: delta must lie in (0, 1]");
  int m = inst.m;
  auto idx = dyadic_decompose(m, delta);
  Output out;
  for (int j = 0; j < m; ++j) out.table.header.push_back("k" + std::to_string(j + 1));
  out.table.header.push_back("N");
  json list = json::array();
  for (const auto& d : idx) {
    list.push_back(d.k);
    std::vector<std::string> row;
    for (int k : d.k) row.push_back(std::to_string(k));
    row.push_back(std::to_string(d.N));
    out.table.rows.push_back(row);
  }
  int N = dyadic_N(delta);
  auto sw = sandwich_check(q, m, delta, cfg.run.samples, cfg.run.seed);
  out.results = {{"run", run_json(cfg.run)},
                 {"m", m},
                 {"delta", delta},
                 {"N", N},
                 {"count", idx.size()},
                 {"expected_count", N >= m ? binomial(N - 1, m - 1) : 0.0},
                 {"indices", list},
                 {"sandwich", to_json(sw)}};
  return out;
}

Output cmd_cover(const InstanceConfig& cfg) {
  const auto& inst = cfg.instance;
  Output out;
  out.table.header = {"qlo", "qhi", "coverage", "uncertainty", "method", "tail_first_moment"};
  json rows = json::array();
  std::vector<std::int64_t> his;
  for (std::int64_t h = std::max<std::int64_t>(cfg.run.qlo, 1); h < cfg.run.qmax; h *= 2) his.push_back(h);
  his.push_back(cfg.run.qmax);
  if (cfg.run.qmax < cfg.run.qlo) throw ConfigError("cover: Qmax must be at least Qlo");
  for (auto h : his) {
    auto est = coverage_fraction({inst, cfg.run.qlo, h}, cfg.run.samples, cfg.run.seed);
    json row{{"qlo", cfg.run.qlo}, {"qhi", h}, {"coverage", to_json(est)}};
    std::string tail;
    try {
      double t = tail_first_moment(inst, cfg.run.qlo, h);
      row["tail_first_moment"] = num_json(t);
      tail = cell(t);
    } catch (const std::exception& e) {
      row["tail_first_moment"] = e.what();
    }
    rows.push_back(row);
    out.table.rows.push_back(
        {std::to_string(cfg.run.qlo), std::to_string(h), cell(est.value), cell(est.half_width), est.method, tail});
  }
  out.results = {{"run", run_json(cfg.run)}, {"stages", rows}};
  return out;
}

Output cmd_quasi(const InstanceConfig& cfg) {
  const auto& inst = cfg.instance;
  auto ws = inst.psi_system();
  constexpr std::int64_t kFamilyCap = 64;
  std::vector<ResonantDescriptor> family;
  std::vector<std::int64_t> used, skipped;
  std::int64_t hi = std::min(cfg.run.qmax, cfg.run.qlo + kFamilyCap - 1);
  for (std::int64_t t = cfg.run.qlo; t <= hi; ++t) {
    std::vector<std::int64_t> c(inst.n, 0);
    c[0] = t;
    LatticePoint q(c);
    try {
      if (inst.mode == Mode::multiplicative) {
        double delta = inst.single()(q);
        if (delta > std::ldexp(1.0, -inst.m)) {  // outside the dyadic range
          skipped.push_back(t);
          continue;
        }
        family.push_back(ResonantDescriptor::mult(q, inst.m, delta));
      } else {
        family.push_back(ResonantDescriptor::weighted(q, ws.values(std::span<const std::int64_t>(q.coords))));
      }
      used.push_back(t);
    } catch (const DomainError&) {
      // psi vanished at q; the set is empty
    }
  }
  Output out;
  out.table.header = {"quantity", "value"};
  QuasiSpec spec;
  spec.max_pairs = 2000;
  spec.samples = std::min<std::size_t>(cfg.run.samples, 20000);
  spec.seed = cfg.run.seed;
  json res{{"run", run_json(cfg.run)}, {"family_q", used}, {"skipped_q", skipped}, {"truncated", cfg.run.qmax > hi}};
  try {
    auto rep = quasi_independence_report(family, spec);
    res["report"] = to_json(rep);
    out.table.rows.push_back({"c", cell(rep.c)});
    out.table.rows.push_back({"lamperti_bound", cell(rep.lamperti_bound)});
  } catch (const DomainError& e) {
    res["reason"] = e.what();
  }
  out.results = res;
  return out;
}

// ---------------------------------------------------------------------------

void emit(const Flags& fl, const std::string& text) {
  if (fl.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(fl.out, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + fl.out + "'");
  os << text;
}

int run_instance_command(const std::string& name, const Flags& fl, Output (*fn)(const InstanceConfig&)) {
  auto cfg = load(fl);
  auto out = fn(cfg);
  if (fl.format == "csv") {
    emit(fl, to_csv(out.table));
  } else {
    emit(fl, dump_report(make_report(name, cfg.echo, cfg.raw_text, cfg.run.seed, out.results)));
  }
  return out.code;
}

int run_verify(const Flags& fl) {
  VerifyOptions opt;
  opt.seed = fl.seed.value_or(42);
  opt.filter = fl.suite;
  opt.baseline_path = fl.baseline;
  static const std::vector<std::string> suites = {"",         "all",      "content",    "resonant",   "criteria",
                                                  "formulas", "estimators", "determinism"};
  bool known = std::find(suites.begin(), suites.end(), opt.filter) != suites.end();
  for (int i = 1; i <= 13 && !known; ++i) known = opt.filter == std::to_string(i);
  if (!known) throw ConfigError("--suite: unknown suite '" + opt.filter + "'");
  auto res = limsup::run_verify(opt);
  for (const auto& r : res.results)
    std::cerr << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << "  " << r.name
              << (r.detail.empty() ? "" : "  (" + r.detail + ")") << "\n";
  if (fl.format == "csv") {
    Table t{{"id", "suite", "name", "status"}, {}};
    for (const auto& r : res.results) t.rows.push_back({std::to_string(r.id), r.suite, r.name, r.passed ? "pass" : "fail"});
    emit(fl, to_csv(t));
  } else {
    std::string echo_text = json{{"suite", opt.filter}, {"baseline", opt.baseline_path}}.dump();
    emit(fl, dump_report(make_report("verify", json::parse(echo_text), echo_text, opt.seed, res.report)));
  }
  return res.all_passed ? kOk : kVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"limsup-lab: criteria, dimensions and oracle checks for Diophantine limsup sets"};
  app.require_subcommand(1, 1);
  Flags fl;
  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", fl.config, "instance config (JSON)");
    if (needs_config) c->required();
    sub->add_option("--seed", fl.seed, "RNG seed");
    sub->add_option("--samples", fl.samples, "Monte-Carlo budget");
    sub->add_option("--Kmax", fl.kmax, "dyadic blocks in series sums");
    sub->add_option("--out", fl.out, "write the report here instead of stdout");
    sub->add_option("--format", fl.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  struct Cmd {
    const char* name;
    const char* help;
    Output (*fn)(const InstanceConfig&);
  };
  const Cmd cmds[] = {
      {"criteria", "series sums, classifications and verdict audits", cmd_criteria},
      {"dims", "dimension formulas and critical exponents", cmd_dims},
      {"fourier", "Fourier dimension and surface coefficients", cmd_fourier},
      {"measure", "resonant set measure, exact and Monte-Carlo", cmd_measure},
      {"decompose", "dyadic decomposition and star sandwich", cmd_decompose},
      {"cover", "finite-stage coverage and tail moments", cmd_cover},
      {"quasi", "pairwise quasi-independence constant", cmd_quasi},
  };
  for (const auto& c : cmds) common(app.add_subcommand(c.name, c.help), true);
  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  common(verify, false);
  verify->add_option("--suite", fl.suite, "content, resonant, criteria, formulas, estimators, determinism or a number");
  verify->add_option("--baseline", fl.baseline, "frozen baseline file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }
  try {
    if (verify->parsed()) return run_verify(fl);
    for (const auto& c : cmds)
      if (app.got_subcommand(c.name)) return run_instance_command(c.name, fl, c.fn);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Inapplicable& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariant;
  }
  return kConfigError;
}
