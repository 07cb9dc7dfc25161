#include "inhibnet/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace inhibnet {

namespace {
int default_workers() {
    static const int n = omp_get_max_threads();
    return n;
}
} // namespace

void set_worker_cap(int workers) {
    const int base = default_workers();
    omp_set_num_threads(workers > 0 ? workers : base);
}

int apply_worker_cap_from_env() {
    const char* raw = std::getenv("INHIBNET_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    int cap = 0;
    try {
        cap = std::stoi(raw);
    } catch (const std::exception&) {
        return 0;
    }
    if (cap <= 0) return 0;
    if (cap > default_workers()) cap = default_workers();
    set_worker_cap(cap);
    return cap;
}

int worker_count() { return omp_get_max_threads(); }

} // namespace inhibnet
