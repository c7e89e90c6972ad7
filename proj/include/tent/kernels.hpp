#pragma once

// Data-parallel loops used by verification, exhaustive cone scans and the
// fine-scan oracle. Every kernel has a serial reference and an OpenMP
// variant; both return identical results because reductions break ties by
// index.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tent::kernels {

enum class Exec { serial, parallel };

inline int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Smallest index i in [0, n) with ok(i) false, or -1.
template <class Pred>
std::ptrdiff_t first_failure(std::ptrdiff_t n, Pred&& ok, Exec exec = Exec::parallel) {
    if (exec == Exec::serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i)
            if (!ok(i)) return i;
        return -1;
    }
    std::ptrdiff_t best = n;
#pragma omp parallel
    {
        std::ptrdiff_t local = n;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i)
            if (i < local && !ok(i)) local = i;
#pragma omp critical(tent_first_failure)
        if (local < best) best = local;
    }
    return best == n ? -1 : best;
}

/// Largest index i in [0, n) with ok(i) true, or -1.
template <class Pred>
std::ptrdiff_t last_success(std::ptrdiff_t n, Pred&& ok, Exec exec = Exec::parallel) {
    if (exec == Exec::serial) {
        for (std::ptrdiff_t i = n - 1; i >= 0; --i)
            if (ok(i)) return i;
        return -1;
    }
    std::ptrdiff_t best = -1;
#pragma omp parallel
    {
        std::ptrdiff_t local = -1;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i)
            if (ok(i)) local = i;
#pragma omp critical(tent_last_success)
        if (local > best) best = local;
    }
    return best;
}

/// Minimum of key(i) over i in [0, n) where key may return +inf to skip.
/// Returns {value, index}; ties resolve to the smallest index.
template <class Key>
std::pair<double, std::ptrdiff_t> min_by_key(std::ptrdiff_t n, Key&& key,
                                             Exec exec = Exec::parallel) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::pair<double, std::ptrdiff_t> best{inf, -1};
    auto better = [](std::pair<double, std::ptrdiff_t> a, std::pair<double, std::ptrdiff_t> b) {
        if (b.second < 0) return a.second >= 0;
        if (a.second < 0) return false;
        return a.first < b.first || (a.first == b.first && a.second < b.second);
    };
    if (exec == Exec::serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            double v = key(i);
            if (v < inf && better({v, i}, best)) best = {v, i};
        }
        return best;
    }
#pragma omp parallel
    {
        std::pair<double, std::ptrdiff_t> local{inf, -1};
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            double v = key(i);
            if (v < inf && better({v, i}, local)) local = {v, i};
        }
#pragma omp critical(tent_min_by_key)
        if (better(local, best)) best = local;
    }
    return best;
}

/// max over i of value(i); max is order independent so both routes agree.
template <class Value>
double max_of(std::ptrdiff_t n, Value&& value, Exec exec = Exec::parallel) {
    double best = -std::numeric_limits<double>::infinity();
    if (exec == Exec::serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) best = std::max(best, value(i));
        return best;
    }
#pragma omp parallel for reduction(max : best) schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) best = std::max(best, value(i));
    return best;
}

}  // namespace tent::kernels
