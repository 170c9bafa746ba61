#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace walg {

inline std::atomic<int>& jobs_setting() {
    static std::atomic<int> n{1};
    return n;
}
inline void set_jobs(int n) { jobs_setting() = std::max(1, n); }
inline int jobs() { return jobs_setting(); }

/// Runs fn(i) for i in [0, n) over jobs() threads. Each index must write only its own output
/// slot, so results do not depend on the thread count. The first exception is rethrown.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
    const int t = std::min(jobs(), n);
    if (t <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(t);
    for (int w = 0; w < t; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += t) fn(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

} // namespace walg
