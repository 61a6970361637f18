#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace zetalab {

inline constexpr const char* kThreadsEnvVar = "ZETALAB_THREADS";

/// Worker-pool width: ZETALAB_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Override the worker width for the current process (0 restores the default).
void set_worker_count(std::size_t n);

/// Evaluates f(0..n-1) on the worker pool. Results are stored by index, so any
/// reduction over the returned vector is independent of the pool width. If
/// several calls throw, the exception from the lowest index is rethrown.
template <class F>
auto parallel_map(std::size_t n, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    const std::size_t width = std::min<std::size_t>(worker_count(), n == 0 ? 1 : n);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (width <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(width);
        for (std::size_t w = 0; w < width; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace zetalab
