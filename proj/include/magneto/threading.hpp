#pragma once

namespace magneto {

// Applies the MAGNETO_THREADS cap to OpenMP if the variable is set.
// Safe to call more than once; only the first call has an effect.
void init_threading();

// Effective worker count after the cap.
int worker_count();

} // namespace magneto
