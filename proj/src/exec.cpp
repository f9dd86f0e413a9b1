#include "snowprobe/exec.hpp"

#include <omp.h>

namespace snowprobe {

namespace {
int g_requested = 0;
}

void set_thread_count(int n) {
  g_requested = n;
  if (n > 0) {
    omp_set_num_threads(n);
  }
}

int thread_count() {
  if (g_requested > 0) return g_requested;
  return omp_get_max_threads();
}

}  // namespace snowprobe
