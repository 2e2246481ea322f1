#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "criteria.hpp"
#include "errors.hpp"
#include "estimators.hpp"
#include "formulas.hpp"
#include "resonant.hpp"

namespace limsup {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// git blob id: sha1("blob <len>\0" + content)
inline std::string git_blob_hash(const std::string& content) {
  std::string buf = "blob " + std::to_string(content.size());
  buf.push_back('\0');
  buf += content;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw InvariantViolation("git_blob_hash: EVP context allocation failed");
  bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 && EVP_DigestUpdate(ctx, buf.data(), buf.size()) == 1 &&
            EVP_DigestFinal_ex(ctx, md, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw InvariantViolation("git_blob_hash: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

// Non-finite doubles become strings so the output stays valid JSON.
inline json num_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline json to_json(const Hypothesis& h) {
  json j{{"hypothesis", h.name}, {"status", to_string(h.status)}};
  if (!h.detail.empty()) j["detail"] = h.detail;
  return j;
}

inline json to_json(const SeriesEstimate& s) {
  json blocks = json::array();
  for (auto [k, v] : s.block_sums) blocks.push_back({{"k", k}, {"sum", num_json(v)}});
  json j{{"block_sums", blocks},
         {"partial_sum", num_json(s.partial_sum)},
         {"classification", to_string(s.classification)},
         {"excluded_shells", s.excluded},
         {"saturated", s.saturated}};
  if (s.growth_exponent) j["growth_exponent"] = num_json(*s.growth_exponent);
  j["fit_residual"] = num_json(s.residual);
  if (s.symbolic) j["symbolic"] = {{"q_power", s.symbolic->a}, {"log_power", s.symbolic->b}};
  return j;
}

inline json to_json(const Verdict& v) {
  json audit = json::array();
  for (const auto& h : v.audit) audit.push_back(to_json(h));
  json j{{"outcome", to_string(v.outcome)}, {"theorem", to_string(v.theorem)}, {"audit", audit}};
  if (!v.measure.empty()) j["measure"] = v.measure;
  if (!v.reason.empty()) j["reason"] = v.reason;
  if (v.would_be) j["would_be"] = to_string(*v.would_be);
  if (v.series_kind) j["series_kind"] = to_string(*v.series_kind);
  if (v.series) j["series"] = to_json(*v.series);
  return j;
}

inline json to_json(const FourierDim& f) {
  json audit = json::array();
  for (const auto& h : f.audit) audit.push_back(to_json(h));
  json j{{"audit", audit}, {"method", f.method}};
  if (f.value) j["value"] = num_json(*f.value);
  else j["reason"] = f.reason;
  return j;
}

inline json to_json(const Estimate& e) {
  return {{"value", num_json(e.value)},
          {"uncertainty", num_json(e.half_width)},
          {"method", e.method},
          {"seed", e.seed},
          {"budget", e.budget}};
}

inline json to_json(const SandwichReport& s) {
  return {{"samples", s.samples},         {"in_inner", s.in_inner},
          {"in_middle", s.in_middle},     {"in_outer", s.in_outer},
          {"left_violations", s.left_violations}, {"right_violations", s.right_violations}};
}

inline json to_json(const QuasiReport& q) {
  return {{"c_raw", num_json(q.c_raw)},    {"c", num_json(q.c)},
          {"lamperti_bound", num_json(q.lamperti_bound)}, {"pairs_used", q.pairs_used},
          {"pairs_excluded", q.pairs_excluded}, {"exact", q.exact}};
}

inline json to_json(const DimensionFunction& f) { return f.describe(); }

inline json instance_json(const ProblemInstance& inst) {
  json psi = json::array();
  for (const auto& c : inst.psi.components()) psi.push_back(c.describe());
  json j{{"n", inst.n}, {"m", inst.m}, {"mode", to_string(inst.mode)}, {"psi", psi}};
  if (inst.f) j["f"] = inst.f->describe();
  return j;
}

// Common envelope; no timing so identical inputs give identical bytes.
inline json make_report(const std::string& command, const json& config_echo, const std::string& config_text,
                        std::uint64_t seed, json results) {
  return {{"command", command},
          {"version", kVersion},
          {"config", config_echo},
          {"config_hash", git_blob_hash(config_text)},
          {"seed", seed},
          {"results", std::move(results)}};
}

inline std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

}  // namespace limsup
