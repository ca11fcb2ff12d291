#pragma once

#if defined(_OPENMP)
#include <omp.h>
#define PSMDS_PRAGMA(x) _Pragma(#x)
#define PSMDS_OMP_PARALLEL_FOR_DYNAMIC(cond) PSMDS_PRAGMA(omp parallel for schedule(dynamic) if (cond))
#define PSMDS_OMP_PARALLEL_FOR_STATIC(cond) PSMDS_PRAGMA(omp parallel for schedule(static) if (cond))
#else
#define PSMDS_OMP_PARALLEL_FOR_DYNAMIC(cond)
#define PSMDS_OMP_PARALLEL_FOR_STATIC(cond)
#endif

namespace psmds {

/// Worker threads used by parallel loops (1 when built without OpenMP).
int thread_count() noexcept;

/// Caps worker threads; values < 1 are ignored.
void set_thread_count(int threads) noexcept;

/// Applies PSMDS_THREADS from the environment when set to a positive integer.
/// Returns the resulting thread count.
int configure_threads_from_env();

}  // namespace psmds
