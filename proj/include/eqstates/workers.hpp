#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace eqs {

/// Fixed-size pool for index-parallel loops. Work items write into slots
/// owned by their index, so results never depend on scheduling.
class WorkerPool {
public:
    explicit WorkerPool(unsigned workers = 1) : workers_(workers == 0 ? 1 : workers) {}

    /// Worker count from EQSTATES_WORKERS when set and valid, else `fallback`.
    static WorkerPool from_env(unsigned fallback = 1);

    unsigned size() const { return workers_; }

    /// Calls fn(i) for i in [0, count). The exception of the lowest failing
    /// index is rethrown after all workers finish.
    template <class Fn>
    void for_each(std::size_t count, Fn&& fn) const
    {
        if (workers_ == 1 || count < 2) {
            for (std::size_t i = 0; i < count; ++i) {
                fn(i);
            }
            return;
        }
        std::atomic<std::size_t> next{0};
        std::mutex guard;
        std::size_t failed_at = count;
        std::exception_ptr failure;
        auto body = [&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(guard);
                    if (i < failed_at) {
                        failed_at = i;
                        failure = std::current_exception();
                    }
                }
            }
        };
        const auto n = std::min<std::size_t>(workers_, count);
        std::vector<std::jthread> threads;
        threads.reserve(n - 1);
        for (std::size_t t = 1; t < n; ++t) {
            threads.emplace_back(body);
        }
        body();
        threads.clear();
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

private:
    unsigned workers_;
};

} // namespace eqs
