#pragma once

#include <cstddef>
#include <functional>

namespace conformal {

// Runs fn(begin, end) over [0, count) in fixed-size chunks. Chunk boundaries
// do not depend on the thread count, so callers that write per-index results
// and merge them in index order get schedule-independent output.
void parallel_chunks(std::size_t count, int threads, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace conformal
