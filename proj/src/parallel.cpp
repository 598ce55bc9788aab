#include "pfde/parallel.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pfde::parallel {

namespace {
int g_workers = 1;
bool g_enabled = true;

int hardware_workers() {
#ifdef _OPENMP
    return std::max(1, omp_get_max_threads());
#else
    return 1;
#endif
}
}  // namespace

void configure_from_env() {
    int w = hardware_workers();
    if (const char* env = std::getenv("PFDE_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) w = std::min(w, cap);
    }
    set_workers(w);
}

void set_workers(int count) {
    g_workers = std::max(1, count);
#ifdef _OPENMP
    omp_set_num_threads(g_workers);
#endif
}

int workers() { return g_workers; }

void set_enabled(bool on) { g_enabled = on; }

bool enabled() {
#ifdef _OPENMP
    return g_enabled;
#else
    return false;
#endif
}

}  // namespace pfde::parallel
