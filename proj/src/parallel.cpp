#include "proxcor/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace proxcor {

unsigned thread_count() {
    if (const char* env = std::getenv("PROXCOR_THREADS")) {
        try {
            const long requested = std::stol(env);
            if (requested > 0) return static_cast<unsigned>(requested);
        } catch (const std::exception&) {
            // unparsable: fall through to auto
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_blocks(std::size_t count, std::size_t block,
                     const std::function<void(std::size_t, std::size_t)>& body) {
    if (count == 0) return;
    block = std::max<std::size_t>(block, 1);
    const std::size_t blocks = (count + block - 1) / block;
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(thread_count(), blocks));
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) body(b * block, std::min(count, (b + 1) * block));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t b = next++; b < blocks; b = next++) {
            try {
                body(b * block, std::min(count, (b + 1) * block));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = blocks;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace proxcor
