#include "specemd/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specemd {

int available_parallelism() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int Execution::threads() const {
  if (workers > 0) return workers;
  return available_parallelism();
}

}  // namespace specemd
