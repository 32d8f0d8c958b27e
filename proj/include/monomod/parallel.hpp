#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace monomod {

// Splits [0, total) into a fixed number of chunks and runs fn(chunk, begin, end)
// on up to `workers` threads. Chunk boundaries depend only on `total` and
// `chunks`, never on the worker count, so callers that store per-chunk partial
// results and combine them in chunk order get worker-count independent output.
inline void for_chunks(long total, int workers, int chunks,
                       const std::function<void(int, long, long)>& fn) {
    if (total <= 0) return;
    if (chunks > total) chunks = static_cast<int>(total);
    if (chunks < 1) chunks = 1;
    if (workers < 1) workers = 1;

    auto bounds = [&](int c) {
        long lo = total * c / chunks;
        long hi = total * (c + 1) / chunks;
        return std::pair<long, long>{lo, hi};
    };

    if (workers == 1) {
        for (int c = 0; c < chunks; ++c) {
            auto [lo, hi] = bounds(c);
            fn(c, lo, hi);
        }
        return;
    }

    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int c = next.fetch_add(1);
            if (c >= chunks) break;
            auto [lo, hi] = bounds(c);
            fn(c, lo, hi);
        }
    };
    std::vector<std::thread> pool;
    int nthreads = std::min(workers, chunks);
    pool.reserve(static_cast<size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

// Compensated (Kahan) accumulator; summation order fixed by the caller.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    void merge(const KahanSum& other) {
        add(other.sum);
        add(-other.carry);
    }
};

// SplitMix64; used to derive independent per-trial seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace monomod
