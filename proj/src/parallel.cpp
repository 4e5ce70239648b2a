#include "geoflow/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace geoflow {

int apply_thread_cap_from_env() {
  const char* raw = std::getenv("GEOFLOW_THREADS");
  if (raw == nullptr) return 0;
  try {
    std::size_t used = 0;
    const int cap = std::stoi(raw, &used);
    if (used != std::string(raw).size() || cap <= 0) return 0;
    omp_set_num_threads(cap);
    return cap;
  } catch (const std::exception&) {
    return 0;
  }
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace geoflow
