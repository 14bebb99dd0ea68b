#pragma once

#include <Eigen/Core>

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace kpls::detail {

/// Runs fn(i) for i in [0, count) across `threads` workers (0 = hardware
/// concurrency). Work items must write to disjoint slots; the first raised
/// exception is rethrown on the calling thread.
inline void parallel_for(Eigen::Index count, int threads,
                         const std::function<void(Eigen::Index)>& fn) {
    if (count <= 0) return;
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (workers > count) workers = static_cast<int>(count);

    if (workers == 1) {
        for (Eigen::Index i = 0; i < count; ++i) fn(i);
        return;
    }

    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (Eigen::Index i = w; i < count; i += workers) fn(i);
            } catch (...) {
                errors[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace kpls::detail
