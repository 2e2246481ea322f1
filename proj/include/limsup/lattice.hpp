#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <span>
#include <vector>

#include "errors.hpp"

namespace limsup {

struct LatticePoint {
  std::vector<std::int64_t> coords;

  LatticePoint() = default;
  explicit LatticePoint(std::vector<std::int64_t> c) : coords(std::move(c)) {
    if (sup_norm() < 1) throw DomainError("LatticePoint: zero vector");
  }
  static LatticePoint scalar(std::int64_t q) { return LatticePoint({q}); }

  int dim() const { return static_cast<int>(coords.size()); }

  std::int64_t sup_norm() const {
    std::int64_t s = 0;
    for (auto c : coords) s = std::max<std::int64_t>(s, std::llabs(c));
    return s;
  }
  double euclid_norm() const {
    double s = 0;
    for (auto c : coords) s += static_cast<double>(c) * static_cast<double>(c);
    return std::sqrt(s);
  }
  std::int64_t gcd() const {
    std::int64_t g = 0;
    for (auto c : coords) g = std::gcd(g, c);
    return g;
  }
  LatticePoint negated() const {
    LatticePoint p;
    for (auto c : coords) p.coords.push_back(-c);
    return p;
  }
  // q . x for x in R^n
  double dot(std::span<const double> x) const {
    double s = 0;
    for (std::size_t i = 0; i < coords.size(); ++i) s += static_cast<double>(coords[i]) * x[i];
    return s;
  }
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint& a, const LatticePoint& b) { return a.coords <=> b.coords; }
};

// (2q+1)^n - (2q-1)^n as a double (exact while below 2^53).
inline double shell_count(int n, std::int64_t q) {
  if (q < 1) throw DomainError("shell_count: q must be positive");
  return std::pow(2.0 * q + 1, n) - std::pow(2.0 * q - 1, n);
}

namespace detail {
template <class Fn>
void shell_rec(int n, std::int64_t q, int pos, bool has_max, std::vector<std::int64_t>& buf, Fn& fn) {
  if (pos == n) {
    if (has_max) fn(std::span<const std::int64_t>(buf));
    return;
  }
  if (pos == n - 1 && !has_max) {
    buf[pos] = -q;
    fn(std::span<const std::int64_t>(buf));
    buf[pos] = q;
    fn(std::span<const std::int64_t>(buf));
    return;
  }
  for (std::int64_t c = -q; c <= q; ++c) {
    buf[pos] = c;
    shell_rec(n, q, pos + 1, has_max || c == -q || c == q, buf, fn);
  }
}
}  // namespace detail

// Visits every q in Z^n with sup norm exactly q, in lexicographic order.
template <class Fn>
void for_each_shell_point(int n, std::int64_t q, Fn fn) {
  if (n < 1 || q < 1) throw DomainError("for_each_shell_point: need n >= 1 and q >= 1");
  std::vector<std::int64_t> buf(n);
  detail::shell_rec(n, q, 0, false, buf, fn);
}

inline std::vector<LatticePoint> enumerate_shell(int n, std::int64_t q) {
  std::vector<LatticePoint> out;
  for_each_shell_point(n, q, [&](std::span<const std::int64_t> c) {
    LatticePoint p;
    p.coords.assign(c.begin(), c.end());
    out.push_back(std::move(p));
  });
  return out;
}

}  // namespace limsup
