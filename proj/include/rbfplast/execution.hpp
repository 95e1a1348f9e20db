#pragma once

namespace rbfplast {

// Selects between the serial reference loops and the OpenMP loops for the
// per-node kernels.
enum class Execution { serial, parallel };

// Applies the thread count from RBFPLAST_THREADS, if set. Returns the number
// of threads OpenMP will use for parallel kernels.
int configure_threads_from_env();

}  // namespace rbfplast
