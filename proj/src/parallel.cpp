#include "polyton/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polyton {

namespace {
int default_threads()
{
#ifdef _OPENMP
    return omp_get_num_procs();
#else
    return 1;
#endif
}
}  // namespace

void set_thread_count(int threads)
{
#ifdef _OPENMP
    omp_set_num_threads(threads > 0 ? threads : default_threads());
#else
    (void)threads;
#endif
}

int thread_count()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void apply_thread_env()
{
    const char* env = std::getenv("POLYTON_THREADS");
    if (!env) return;
    try {
        const int n = std::stoi(env);
        if (n > 0) set_thread_count(n);
    } catch (...) {
    }
}

}  // namespace polyton
