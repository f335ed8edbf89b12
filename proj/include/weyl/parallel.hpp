#pragma once

#include <cstddef>
#include <functional>

namespace weyl {

/// Process-wide default worker count. Set once by the CLI (flag or
/// WEYL_LAB_WORKERS); library callers may pass explicit counts instead.
int default_workers();
void set_default_workers(int n);

/// Runs fn(chunk_begin, chunk_end) over [0, n) split into fixed-size chunks.
/// Chunk boundaries depend only on n, never on the worker count, so any
/// per-chunk outputs combined in ascending chunk order are bit-identical
/// for every worker count. fn must only write to chunk-owned state.
void parallel_chunks(std::size_t n, std::size_t chunk_size, int workers,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace weyl
