#include "weyl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace weyl {

namespace {
std::atomic<int> g_workers{1};
}

int default_workers() { return g_workers.load(); }

void set_default_workers(int n) { g_workers.store(std::max(1, n)); }

void parallel_chunks(std::size_t n, std::size_t chunk_size, int workers,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    if (workers <= 0) workers = default_workers();
    std::size_t nchunks = (n + chunk_size - 1) / chunk_size;
    if (workers == 1 || nchunks == 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            fn(c * chunk_size, std::min(n, (c + 1) * chunk_size));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            fn(c * chunk_size, std::min(n, (c + 1) * chunk_size));
        }
    };
    std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(workers), nchunks);
    std::vector<std::thread> pool;
    pool.reserve(nthreads - 1);
    for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

}  // namespace weyl
