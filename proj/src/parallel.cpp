#include "evodd/parallel.hpp"

#include "evodd/error.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace evodd {

int worker_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_worker_count(int n) {
  if (n < 1) throw Error(ErrorKind::configuration, "harness", "worker count must be >= 1");
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
}

int configure_workers_from_env() {
  if (const char* env = std::getenv("EVODD_WORKERS"); env != nullptr && *env != '\0') {
    int n = 0;
    try {
      n = std::stoi(env);
    } catch (const std::exception&) {
      throw Error(ErrorKind::configuration, "harness", std::string("EVODD_WORKERS is not an integer: ") + env);
    }
    set_worker_count(n);
  }
  return worker_count();
}

}  // namespace evodd
