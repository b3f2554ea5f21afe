#include "dyncliq/threading.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

#include "dyncliq/errors.hpp"

namespace dyncliq {

namespace {

int resolve_default() {
  if (const char* env = std::getenv("DYNCLIQ_THREADS")) {
    try {
      int t = std::stoi(env);
      if (t > 0) return t;
    } catch (const std::exception&) {
      // fall through to the OpenMP default
    }
  }
  return omp_get_max_threads();
}

int g_threads = 0;

}  // namespace

void set_num_threads(int threads) {
  if (threads < 0) throw ParameterError("thread count must be >= 0");
  g_threads = threads > 0 ? threads : resolve_default();
  omp_set_num_threads(g_threads);
}

int get_num_threads() {
  if (g_threads == 0) set_num_threads(0);
  return g_threads;
}

}  // namespace dyncliq
