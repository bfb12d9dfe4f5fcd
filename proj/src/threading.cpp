#include "magneto/threading.hpp"

#include <cstdlib>
#include <omp.h>

namespace magneto {

static int g_workers = 0;

void init_threading() {
    if (g_workers > 0) return;
    int n = omp_get_max_threads();
    if (const char* cap = std::getenv("MAGNETO_THREADS")) {
        int c = std::atoi(cap);
        if (c >= 1 && c < n) n = c;
    }
    omp_set_num_threads(n);
    g_workers = n;
}

int worker_count() {
    if (g_workers == 0) init_threading();
    return g_workers;
}

} // namespace magneto
