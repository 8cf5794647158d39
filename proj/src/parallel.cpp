#include "humplab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "humplab/errors.hpp"

namespace humplab {

int resolve_threads(int requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("HUMPLAB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<int>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(long count, int threads, const std::function<void(long)>& fn) {
    if (count <= 0)
        return;
    if (threads < 1)
        throw ArgumentError("thread count must be positive");
    if (threads == 1 || count == 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            long i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next.store(count);  // drain remaining work
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    const int n_workers = static_cast<int>(std::min<long>(threads, count));
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace humplab
