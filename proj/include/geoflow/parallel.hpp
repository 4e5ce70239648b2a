#pragma once

#include <cstddef>
#include <cstdint>

namespace geoflow {

/// Execution policy for per-point kernels. Both policies run the same
/// per-point code; serial is the reference the parallel path is tested against.
enum class Exec { serial, parallel };

/// Caps OpenMP parallelism from GEOFLOW_THREADS when it is set to a positive integer.
/// Returns the cap applied, or 0 when the variable is absent or invalid.
int apply_thread_cap_from_env();

int max_threads();

template <class Fn>
void for_each_index(Exec exec, std::size_t count, Fn&& fn) {
  const auto n = static_cast<std::int64_t>(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
  } else {
    for (std::int64_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
  }
}

}  // namespace geoflow
