#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace limsup {

inline constexpr const char* kWorkersEnv = "LIMSUP_WORKERS";

namespace detail {
inline std::atomic<unsigned>& worker_override() {
  static std::atomic<unsigned> value{0};
  return value;
}
}  // namespace detail

// Programmatic override (0 restores the environment/default rule).
inline void set_worker_count(unsigned workers) { detail::worker_override() = workers; }

inline unsigned worker_count() {
  if (unsigned w = detail::worker_override().load(); w > 0) return w;
  if (const char* env = std::getenv(kWorkersEnv)) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Evaluates fn(i) for i in [0, count) and returns the results in index order.
// Work is split into contiguous chunks; the output never depends on the
// worker count, only on fn.
template <class Fn>
auto parallel_map(std::size_t count, Fn fn) {
  using R = std::invoke_result_t<Fn, std::size_t>;
  std::vector<R> out(count);
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      std::size_t lo = w * chunk, hi = std::min(count, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// Sum of fn(i) over [0, count) split into fixed blocks; partial sums are
// combined in block order so the result is bit-identical for any worker count.
template <class Fn>
double parallel_sum(std::size_t count, Fn fn, std::size_t block = 4096) {
  std::size_t blocks = (count + block - 1) / block;
  auto partial = parallel_map(blocks, [&](std::size_t b) {
    double s = 0.0;
    std::size_t hi = std::min(count, (b + 1) * block);
    for (std::size_t i = b * block; i < hi; ++i) s += fn(i);
    return s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace limsup
