#pragma once

#include <cstddef>
#include <exception>

#ifdef TENDEVAL_HAVE_OPENMP
#include <omp.h>
#endif

namespace tendeval {

/// Selects the serial reference loop or the OpenMP kernel. Both paths
/// evaluate every index with the same per-index arithmetic, so outputs are
/// bit-identical.
enum class Exec { serial, parallel };

inline bool openmp_enabled()
{
#ifdef TENDEVAL_HAVE_OPENMP
    return true;
#else
    return false;
#endif
}

/// Runs body(i) for i in [0, n). Each index must write only to its own
/// output slot. If any index throws, one of the exceptions is rethrown
/// after the loop completes.
template <class Body>
void for_each_index(Exec exec, std::size_t n, Body&& body)
{
    if (exec == Exec::serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
#ifdef TENDEVAL_HAVE_OPENMP
    std::exception_ptr failure;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(tendeval_for_each_index)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
#else
    for (std::size_t i = 0; i < n; ++i)
        body(i);
#endif
}

} // namespace tendeval
