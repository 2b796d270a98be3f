#include "deconv/runtime.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace deconv::runtime {

int max_threads() {
#ifdef _OPENMP
    int limit = omp_get_max_threads();
#else
    int limit = 1;
#endif
    if (const char* env = std::getenv("DECONV_THREADS")) {
        try {
            const int cap = std::stoi(env);
            limit = std::clamp(cap, 1, limit);
        } catch (...) {
            // unparsable value: keep the default
        }
    }
    return std::max(limit, 1);
}

bool parallel_enabled() {
#ifdef _OPENMP
    return max_threads() > 1;
#else
    return false;
#endif
}

} // namespace deconv::runtime
