#pragma once

#include <omp.h>

#include <cstdint>
#include <cstdlib>
#include <utility>

namespace eigenbound {

// Every Monte Carlo kernel takes an execution policy. Parallel runs use
// OpenMP; the serial path is kept as the reference implementation and the two
// must produce bit-identical results (work is addressed by index, streams are
// counter-based, reductions happen serially afterwards).
enum class Exec { Serial, Parallel };

// Worker count: hardware concurrency, capped by EIGENBOUND_THREADS if set.
inline int max_threads() {
  int hw = omp_get_max_threads();
  if (const char* env = std::getenv("EIGENBOUND_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && cap < hw) hw = cap;
  }
  return hw < 1 ? 1 : hw;
}

template <class F>
void parallel_for(std::int64_t n, Exec exec, F&& body) {
  if (exec == Exec::Parallel) {
    int k = max_threads();
#pragma omp parallel for schedule(static) num_threads(k)
    for (std::int64_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) body(i);
  }
}

}  // namespace eigenbound
