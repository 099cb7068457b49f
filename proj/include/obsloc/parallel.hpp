#pragma once

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace obsloc {

/// Execution mode for the data-parallel kernels. Serial is the reference
/// implementation; Parallel uses OpenMP when compiled in. Kernels are written
/// map-style (independent output slots, fixed-order reductions) so both modes
/// produce bitwise identical results.
enum class ExecMode { Serial, Parallel };

template <typename F>
void parallel_for(std::size_t n, ExecMode mode, F&& fn) {
#ifdef _OPENMP
  if (mode == ExecMode::Parallel) {
    #pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      fn(static_cast<std::size_t>(i));
    }
    return;
  }
#else
  (void)mode;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace obsloc
