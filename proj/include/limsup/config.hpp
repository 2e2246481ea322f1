#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "funcspace.hpp"
#include "instance.hpp"

namespace limsup {

using json = nlohmann::json;

struct RunConfig {
  int kmax = 12;
  std::int64_t qlo = 1;
  std::int64_t qmax = 1000;
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  std::optional<double> delta;
  std::optional<std::vector<std::int64_t>> q;
  std::optional<double> tolerance;
};

struct InstanceConfig {
  int schema_version = 1;
  ProblemInstance instance;
  RunConfig run;
  json echo;             // the parsed document
  std::string raw_text;  // bytes the hash is taken over
};

namespace detail {

inline void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError(where + ": unknown field '" + it.key() + "'");
}

inline const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline double num(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

inline std::int64_t integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<std::int64_t>();
}

inline double num_or(const json& j, const char* key, double dflt, const std::string& where) {
  return j.contains(key) ? num(j.at(key), where + "." + key) : dflt;
}

inline ApproximatingFunction parse_psi(const json& j, int n, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::string kind = need(j, "kind", where).is_string() ? j.at("kind").get<std::string>() : "";
  try {
    if (kind == "power") {
      only_keys(j, {"kind", "tau", "coeff"}, where);
      return ApproximatingFunction::power(n, num(need(j, "tau", where), where + ".tau"),
                                          num_or(j, "coeff", 1.0, where));
    }
    if (kind == "power_log") {
      only_keys(j, {"kind", "tau", "p", "coeff"}, where);
      return ApproximatingFunction::power_log(n, num(need(j, "tau", where), where + ".tau"),
                                              num(need(j, "p", where), where + ".p"), num_or(j, "coeff", 1.0, where));
    }
    if (kind == "constant") {
      only_keys(j, {"kind", "c"}, where);
      return ApproximatingFunction::constant(n, num(need(j, "c", where), where + ".c"));
    }
    if (kind == "table") {
      only_keys(j, {"kind", "values"}, where);
      const auto& v = need(j, "values", where);
      if (!v.is_array()) throw ConfigError(where + ".values: expected an array");
      std::vector<double> vals;
      for (const auto& x : v) vals.push_back(num(x, where + ".values"));
      return ApproximatingFunction::table(n, std::move(vals));
    }
  } catch (const DomainError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ".kind: expected power, power_log, constant or table");
}

inline DimensionFunction parse_f(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::string kind = need(j, "kind", where).is_string() ? j.at("kind").get<std::string>() : "";
  try {
    if (kind == "power") {
      only_keys(j, {"kind", "s", "cap"}, where);
      return DimensionFunction::power(num(need(j, "s", where), where + ".s"), num_or(j, "cap", kInvE, where));
    }
    if (kind == "power_log") {
      only_keys(j, {"kind", "s", "p", "cap"}, where);
      double s = num(need(j, "s", where), where + ".s"), p = num(need(j, "p", where), where + ".p");
      if (j.contains("cap")) return DimensionFunction::power_log(s, p, num(j.at("cap"), where + ".cap"));
      double cap = std::min(kInvE, s > 0 ? std::exp(-p / s) : kInvE);
      return DimensionFunction::power_log(s, p, cap);
    }
    if (kind == "table") {
      only_keys(j, {"kind", "points", "cap"}, where);
      const auto& v = need(j, "points", where);
      if (!v.is_array()) throw ConfigError(where + ".points: expected an array");
      std::vector<std::pair<double, double>> pts;
      for (const auto& p : v) {
        if (!p.is_array() || p.size() != 2) throw ConfigError(where + ".points: expected [r, value] pairs");
        pts.push_back({num(p[0], where + ".points"), num(p[1], where + ".points")});
      }
      return DimensionFunction::table(std::move(pts), num_or(j, "cap", kInvE, where));
    }
  } catch (const DomainError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ".kind: expected power, power_log or table");
}

inline RunConfig parse_run(const json& j) {
  only_keys(j, {"Kmax", "Qlo", "Qmax", "samples", "seed", "delta", "q", "tolerance"}, "run");
  RunConfig r;
  if (j.contains("Kmax")) r.kmax = static_cast<int>(integer(j.at("Kmax"), "run.Kmax"));
  if (j.contains("Qlo")) r.qlo = integer(j.at("Qlo"), "run.Qlo");
  if (j.contains("Qmax")) r.qmax = integer(j.at("Qmax"), "run.Qmax");
  if (j.contains("samples")) {
    auto s = integer(j.at("samples"), "run.samples");
    if (s < 1) throw ConfigError("run.samples: must be positive");
    r.samples = static_cast<std::size_t>(s);
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("run.seed: expected a non-negative integer");
    r.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("delta")) {
    r.delta = num(j.at("delta"), "run.delta");
    if (!(*r.delta > 0)) throw ConfigError("run.delta: must be positive");
  }
  if (j.contains("q")) {
    const auto& v = j.at("q");
    if (!v.is_array() || v.empty()) throw ConfigError("run.q: expected a non-empty integer array");
    std::vector<std::int64_t> q;
    for (const auto& x : v) q.push_back(integer(x, "run.q"));
    r.q = q;
  }
  if (j.contains("tolerance")) r.tolerance = num(j.at("tolerance"), "run.tolerance");
  if (r.kmax < 1 || r.kmax > 30) throw ConfigError("run.Kmax: must lie in [1, 30]");
  if (r.qlo < 1) throw ConfigError("run.Qlo: must be positive");
  if (r.qmax < 1) throw ConfigError("run.Qmax: must be positive");
  return r;
}

}  // namespace detail

inline InstanceConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  detail::only_keys(doc, {"schema_version", "instance", "run"}, "config");
  InstanceConfig cfg;
  cfg.raw_text = text;
  cfg.echo = doc;
  cfg.schema_version = static_cast<int>(detail::integer(detail::need(doc, "schema_version", "config"), "schema_version"));
  if (cfg.schema_version != 1) throw ConfigError("schema_version: only version 1 is supported");
  const auto& ij = detail::need(doc, "instance", "config");
  detail::only_keys(ij, {"n", "m", "mode", "psi", "f"}, "instance");
  auto n = detail::integer(detail::need(ij, "n", "instance"), "instance.n");
  auto m = detail::integer(detail::need(ij, "m", "instance"), "instance.m");
  if (n < 1 || n > 8) throw ConfigError("instance.n: must lie in [1, 8]");
  if (m < 1 || m > 8) throw ConfigError("instance.m: must lie in [1, 8]");
  const auto& mj = detail::need(ij, "mode", "instance");
  if (!mj.is_string()) throw ConfigError("instance.mode: expected a string");
  Mode mode = parse_mode(mj.get<std::string>());
  const auto& pj = detail::need(ij, "psi", "instance");
  if (!pj.is_array() || pj.empty()) throw ConfigError("instance.psi: expected a non-empty array");
  std::vector<ApproximatingFunction> comps;
  for (std::size_t i = 0; i < pj.size(); ++i)
    comps.push_back(detail::parse_psi(pj[i], static_cast<int>(n), "instance.psi[" + std::to_string(i) + "]"));
  std::optional<DimensionFunction> f;
  if (ij.contains("f")) f = detail::parse_f(ij.at("f"), "instance.f");
  switch (mode) {
    case Mode::weighted:
      if (static_cast<std::int64_t>(comps.size()) != m) throw ConfigError("instance.psi: weighted mode needs m entries");
      cfg.instance = ProblemInstance(static_cast<int>(n), static_cast<int>(m), mode, WeightSystem(comps), f);
      break;
    case Mode::nonweighted:
      if (comps.size() != 1 && static_cast<std::int64_t>(comps.size()) != m)
        throw ConfigError("instance.psi: nonweighted mode needs 1 or m entries");
      for (std::size_t i = 1; i < comps.size(); ++i)
        if (pj[i] != pj[0]) throw ConfigError("instance.psi: nonweighted mode needs identical components");
      cfg.instance = ProblemInstance(static_cast<int>(n), static_cast<int>(m), mode, WeightSystem({comps[0]}), f);
      break;
    case Mode::multiplicative:
      if (comps.size() != 1) throw ConfigError("instance.psi: multiplicative mode needs exactly one entry");
      cfg.instance = ProblemInstance(static_cast<int>(n), static_cast<int>(m), mode, WeightSystem({comps[0]}), f);
      break;
  }
  cfg.run = doc.contains("run") ? detail::parse_run(doc.at("run")) : RunConfig{};
  return cfg;
}

inline InstanceConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace limsup
