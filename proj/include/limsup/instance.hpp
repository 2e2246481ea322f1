#pragma once

#include <optional>
#include <string>

#include "errors.hpp"
#include "funcspace.hpp"

namespace limsup {

enum class Mode { weighted, nonweighted, multiplicative };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::weighted: return "weighted";
    case Mode::nonweighted: return "nonweighted";
    case Mode::multiplicative: return "multiplicative";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "weighted") return Mode::weighted;
  if (s == "nonweighted") return Mode::nonweighted;
  if (s == "multiplicative") return Mode::multiplicative;
  throw ConfigError("unknown mode '" + s + "'");
}

// W(n,m;Ψ) or M^×(n,m;ψ). Nonweighted and multiplicative instances hold a
// single ψ; psi_system() repeats it m times for the nonweighted case.
struct ProblemInstance {
  int n = 1;
  int m = 1;
  Mode mode = Mode::nonweighted;
  WeightSystem psi;
  std::optional<DimensionFunction> f;

  ProblemInstance() = default;
  ProblemInstance(int n_, int m_, Mode mode_, WeightSystem psi_, std::optional<DimensionFunction> f_ = std::nullopt)
      : n(n_), m(m_), mode(mode_), psi(std::move(psi_)), f(std::move(f_)) {
    validate();
  }

  static ProblemInstance nonweighted(int m, const ApproximatingFunction& psi,
                                     std::optional<DimensionFunction> f = std::nullopt) {
    return ProblemInstance(psi.n(), m, Mode::nonweighted, WeightSystem({psi}), std::move(f));
  }
  static ProblemInstance weighted(WeightSystem ws, std::optional<DimensionFunction> f = std::nullopt) {
    int n = ws.n(), m = ws.m();
    return ProblemInstance(n, m, Mode::weighted, std::move(ws), std::move(f));
  }
  static ProblemInstance multiplicative(int m, const ApproximatingFunction& psi,
                                        std::optional<DimensionFunction> f = std::nullopt) {
    return ProblemInstance(psi.n(), m, Mode::multiplicative, WeightSystem({psi}), std::move(f));
  }

  void validate() const {
    if (n < 1 || m < 1) throw ConfigError("instance: n and m must be positive");
    if (psi.components().empty()) throw ConfigError("instance: missing approximating function");
    if (psi.n() != n) throw ConfigError("instance: psi arity differs from n");
    if (mode == Mode::weighted && psi.m() != m) throw ConfigError("instance: weighted mode needs m components");
    if (mode != Mode::weighted && psi.m() != 1) throw ConfigError("instance: expected a single psi");
  }

  int d() const { return n * m; }
  const ApproximatingFunction& single() const { return psi[0]; }
  WeightSystem psi_system() const {
    if (mode == Mode::weighted) return psi;
    return WeightSystem::repeated(psi[0], m);
  }
};

}  // namespace limsup
