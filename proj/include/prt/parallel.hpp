#ifndef PRT_PARALLEL_HPP
#define PRT_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace prt {

// Global worker count (set by the CLI --threads flag). Results never depend
// on it: work splits into a fixed number of chunks combined in index order.
void set_thread_count(unsigned n);
unsigned thread_count();

// Splits [0, n) into `chunks` fixed ranges, applies chunk_fn(begin, end) to
// each (possibly concurrently), then folds the per-chunk results in ascending
// chunk order with combine(acc, chunk_result).
template <class T, class ChunkFn, class Combine>
T chunked_reduce(size_t n, T init, ChunkFn&& chunk_fn, Combine&& combine, size_t chunks = 256) {
    if (n == 0) return init;
    if (chunks > n) chunks = n;
    std::vector<T> results(chunks, init);
    unsigned workers = thread_count();
    if (workers <= 1) {
        for (size_t c = 0; c < chunks; ++c) {
            size_t lo = n * c / chunks, hi = n * (c + 1) / chunks;
            results[c] = chunk_fn(lo, hi);
        }
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            while (true) {
                size_t c = next.fetch_add(1);
                if (c >= chunks) break;
                size_t lo = n * c / chunks, hi = n * (c + 1) / chunks;
                results[c] = chunk_fn(lo, hi);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    T acc = init;
    for (size_t c = 0; c < chunks; ++c) acc = combine(acc, results[c]);
    return acc;
}

}  // namespace prt

#endif
