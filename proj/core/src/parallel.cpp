#include "psmds/parallel.hpp"

#include <cstdlib>
#include <string>

namespace psmds {

int thread_count() noexcept {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_thread_count(int threads) noexcept {
#if defined(_OPENMP)
  if (threads >= 1) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int configure_threads_from_env() {
  if (const char* raw = std::getenv("PSMDS_THREADS")) {
    try {
      const int requested = std::stoi(raw);
      set_thread_count(requested);
    } catch (const std::exception&) {
      // unparsable value: keep the runtime default
    }
  }
  return thread_count();
}

}  // namespace psmds
