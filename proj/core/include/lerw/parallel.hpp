#ifndef LERW_PARALLEL_HPP
#define LERW_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lerw {

inline constexpr uint64_t kDefaultBlockSize = 256;

inline int effective_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

// Runs `replicas` independent tasks split into fixed-size blocks. Workers
// claim blocks through an atomic counter and store one result per block;
// `merge` then consumes the results in block order on the calling thread.
// Block boundaries depend only on `block_size`, so results are identical
// for every worker count.
//
//   block_fn(block_index, replica_begin, replica_end) -> BlockResult
//   merge(block_index, BlockResult&&)
template <class BlockResult, class BlockFn, class MergeFn>
void run_blocks(uint64_t replicas, int workers, BlockFn&& block_fn,
                MergeFn&& merge, uint64_t block_size = kDefaultBlockSize) {
    if (replicas == 0) return;
    uint64_t nblocks = (replicas + block_size - 1) / block_size;
    std::vector<BlockResult> results(nblocks);
    std::atomic<uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&]() {
        for (;;) {
            uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= nblocks) return;
            uint64_t lo = b * block_size;
            uint64_t hi = std::min(replicas, lo + block_size);
            try {
                results[b] = block_fn(b, lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    int w = effective_workers(workers);
    if (w <= 1 || nblocks == 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(size_t(w));
        for (int i = 0; i < w; ++i) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }
    if (error) std::rethrow_exception(error);
    for (uint64_t b = 0; b < nblocks; ++b) merge(b, std::move(results[b]));
}

// Variant for heavy accumulators (for example per-edge count arrays): one
// accumulator per worker, combined in worker order. Only valid when the
// accumulation is exact and commutative (integer counters), which keeps the
// result independent of how blocks land on workers.
template <class Accum, class MakeFn, class ReplicaFn, class CombineFn>
Accum run_replicas_exact(uint64_t replicas, int workers, MakeFn&& make,
                         ReplicaFn&& fn, CombineFn&& combine,
                         uint64_t block_size = kDefaultBlockSize) {
    int w = effective_workers(workers);
    uint64_t nblocks = (replicas + block_size - 1) / block_size;
    std::atomic<uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<Accum> accums;
    accums.reserve(size_t(w));
    for (int i = 0; i < w; ++i) accums.push_back(make());

    auto work = [&](int wi) {
        Accum& acc = accums[size_t(wi)];
        for (;;) {
            uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= nblocks) return;
            uint64_t lo = b * block_size;
            uint64_t hi = std::min(replicas, lo + block_size);
            try {
                for (uint64_t r = lo; r < hi; ++r) fn(acc, r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    if (w <= 1 || nblocks <= 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(size_t(w));
        for (int i = 0; i < w; ++i) threads.emplace_back(work, i);
        for (auto& t : threads) t.join();
    }
    if (error) std::rethrow_exception(error);
    for (int i = 1; i < w; ++i) combine(accums[0], accums[size_t(i)]);
    return std::move(accums[0]);
}

} // namespace lerw

#endif
