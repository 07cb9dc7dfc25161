#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>

namespace inhibnet {

/// Selects the OpenMP kernel or the serial reference path of the same loop.
enum class Exec { Serial, Parallel };

/// Caps the OpenMP worker count; 0 restores the runtime default.
void set_worker_cap(int workers);

/// Reads INHIBNET_THREADS and applies it via set_worker_cap. Returns the cap (0 if unset).
int apply_worker_cap_from_env();

int worker_count();

enum class Schedule { Static, Dynamic };

/// Runs f(i) for i in [0, n). Iterations must be independent and write to disjoint slots.
/// The first exception thrown by any iteration is rethrown after the loop.
template <class F>
void for_each_index(std::size_t n, Exec exec, F&& f, Schedule schedule = Schedule::Dynamic) {
    const auto count = static_cast<std::int64_t>(n);
    if (exec == Exec::Serial) {
        for (std::int64_t i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto guarded = [&](std::int64_t i) {
        try {
            f(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    if (schedule == Schedule::Dynamic) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < count; ++i) guarded(i);
    } else {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) guarded(i);
    }
    if (failure) std::rethrow_exception(failure);
}

} // namespace inhibnet
