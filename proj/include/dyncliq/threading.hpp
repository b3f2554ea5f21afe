#pragma once

namespace dyncliq {

// Thread count used by all parallel kernels. Defaults to the value of the
// DYNCLIQ_THREADS environment variable if set, otherwise the OpenMP default.
// set_num_threads(0) re-applies the default.
void set_num_threads(int threads);
int get_num_threads();

}  // namespace dyncliq
