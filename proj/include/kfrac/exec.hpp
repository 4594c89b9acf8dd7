#pragma once

#include <cstddef>
#include <exception>

namespace kfrac {

// Serial is the reference path; parallel must reproduce it bit for bit.
enum class Exec { serial, parallel };

// Runs f(0..n-1). Work items must not share mutable state. The first
// exception thrown by any item is rethrown after the loop.
template <class F>
void for_each_index(Exec ex, std::size_t n, F&& f) {
    if (ex == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::exception_ptr err;
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
        try {
            f(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(kfrac_exec_error)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace kfrac
