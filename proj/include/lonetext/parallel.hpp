#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lonetext {

inline int effective_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

inline std::size_t block_count(std::size_t n, std::size_t block_size) {
    return block_size == 0 ? 0 : (n + block_size - 1) / block_size;
}

// Runs fn(block_index, begin, end) over [0, n) split into fixed-size blocks.
// Block boundaries depend only on n and block_size, never on the worker
// count, so callers can merge per-block results in block order and get
// bit-identical output at any thread count.
template <typename Fn>
void for_blocks(std::size_t n, std::size_t block_size, int threads, Fn&& fn) {
    if (n == 0) return;
    if (block_size == 0) block_size = 1;
    const std::size_t blocks = block_count(n, block_size);
    const int workers = std::min<std::size_t>(effective_threads(threads), blocks);

    auto run_block = [&](std::size_t b) {
        std::size_t begin = b * block_size;
        std::size_t end = std::min(begin + block_size, n);
        fn(b, begin, end);
    };

    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) run_block(b);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        try {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                if (b >= blocks) return;
                run_block(b);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int i = 0; i < workers - 1; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace lonetext
