#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace ghost {

inline unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// out[i] = f(in[i]); results land in input order whatever the thread count.
template <class T, class F>
auto parallel_map(const std::vector<T>& in, F f, unsigned jobs = 0) -> std::vector<decltype(f(in.front()))> {
    using R = decltype(f(in.front()));
    std::vector<std::optional<R>> slots(in.size());
    if (jobs == 0) jobs = default_jobs();
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, in.size()));
    auto collect = [&] {
        std::vector<R> out;
        out.reserve(slots.size());
        for (auto& s : slots) out.push_back(std::move(*s));
        return out;
    };
    if (jobs <= 1) {
        for (std::size_t i = 0; i < in.size(); ++i) slots[i].emplace(f(in[i]));
        return collect();
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < in.size();) {
            try {
                slots[i].emplace(f(in[i]));
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (!err) err = std::current_exception();
                next = in.size();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    return collect();
}

}  // namespace ghost
