#ifndef LATTICEGUIDE_PARALLEL_HPP
#define LATTICEGUIDE_PARALLEL_HPP

#include <cstdlib>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

namespace latticeguide {

// Worker cap from LATTICE_GUIDE_THREADS (>= 1); hardware concurrency otherwise.
inline unsigned worker_cap() {
  if (const char* env = std::getenv("LATTICE_GUIDE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Static block partition over [0, n); fn(i) must write only into slot i of a
// pre-sized result container, so the merged output never depends on the
// thread count.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
  const unsigned workers = std::min<std::size_t>(worker_cap(), n > 0 ? n : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace latticeguide

#endif  // LATTICEGUIDE_PARALLEL_HPP
