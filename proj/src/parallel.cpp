#include "zetamoment/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace zm {

unsigned resolve_threads(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
}

void parallel_for_blocks(std::size_t n_blocks, unsigned threads,
                         const std::function<void(std::size_t)>& work) {
    if (n_blocks == 0) return;
    if (threads == 0) threads = 1;
    if (threads == 1 || n_blocks == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) work(b);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto body = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks) return;
            try {
                work(b);
            } catch (...) {
                std::lock_guard<std::mutex> lk(error_mutex);
                if (!first_error) first_error = std::current_exception();
                // Drain remaining blocks so all workers wind down quickly.
                next.store(n_blocks, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    unsigned n = threads < n_blocks ? threads : static_cast<unsigned>(n_blocks);
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(body);
    for (auto& t : pool) t.join();

    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace zm
