#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace fball {

// worker count: FBALL_WORKERS wins, otherwise hardware concurrency capped at 8
inline unsigned worker_count() {
    if (const char* env = std::getenv("FBALL_WORKERS")) {
        long n = std::atol(env);
        if (n >= 1) return static_cast<unsigned>(n > 64 ? 64 : n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return hw > 8 ? 8 : hw;
}

// results keep input order, so output is identical for any worker count
template <class T, class F>
auto parallel_map(const std::vector<T>& in, F f) {
    using R = decltype(f(in.front()));
    std::vector<std::optional<R>> slots(in.size());
    unsigned workers = worker_count();
    if (workers <= 1 || in.size() <= 1) {
        for (size_t i = 0; i < in.size(); ++i) slots[i].emplace(f(in[i]));
    } else {
        std::atomic<size_t> next{0};
        std::exception_ptr err;
        std::mutex err_mu;
        auto body = [&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= in.size()) return;
                try {
                    slots[i].emplace(f(in[i]));
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
        if (err) std::rethrow_exception(err);
    }
    std::vector<R> out;
    out.reserve(in.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace fball
