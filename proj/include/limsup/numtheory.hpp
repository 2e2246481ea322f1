#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace limsup {

// Euler totient for 0..limit by the linear sieve.
inline std::vector<std::int64_t> totient_sieve(std::int64_t limit) {
  if (limit < 0) throw DomainError("totient_sieve: negative limit");
  std::vector<std::int64_t> phi(limit + 1, 0);
  std::vector<std::int64_t> primes;
  if (limit >= 1) phi[1] = 1;
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (phi[i] == 0) {
      phi[i] = i - 1;
      primes.push_back(i);
    }
    for (std::int64_t p : primes) {
      std::int64_t ip = i * p;
      if (ip > limit) break;
      if (i % p == 0) {
        phi[ip] = phi[i] * p;
        break;
      }
      phi[ip] = phi[i] * (p - 1);
    }
  }
  return phi;
}

// Process-wide cache, grown on demand.
inline std::int64_t totient(std::int64_t q) {
  static std::mutex mu;
  static std::vector<std::int64_t> table;
  if (q < 1) throw DomainError("totient: q must be positive");
  std::lock_guard<std::mutex> lock(mu);
  if (q >= static_cast<std::int64_t>(table.size())) {
    std::int64_t limit = std::max<std::int64_t>(q, 2 * static_cast<std::int64_t>(table.size()));
    limit = std::max<std::int64_t>(limit, 1024);
    table = totient_sieve(limit);
  }
  return table[q];
}

inline bool coprime(std::int64_t a, std::int64_t b) { return std::gcd(a, b) == 1; }

// Lengths of the gaps between consecutive integers coprime to d, over one
// period, grouped as gap -> multiplicity. Sum of gap*multiplicity is d.
inline std::map<std::int64_t, std::int64_t> coprime_gaps(std::int64_t d) {
  if (d < 1) throw DomainError("coprime_gaps: d must be positive");
  std::map<std::int64_t, std::int64_t> gaps;
  std::int64_t first = -1, prev = -1;
  for (std::int64_t r = 0; r < d; ++r) {
    if (!coprime(r, d)) continue;
    if (first < 0) first = r;
    if (prev >= 0) ++gaps[r - prev];
    prev = r;
  }
  ++gaps[first + d - prev];
  return gaps;
}

}  // namespace limsup
