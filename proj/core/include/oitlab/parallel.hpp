#pragma once

#include <cstddef>
#include <functional>

namespace oitlab {

// Worker cap: OITLAB_THREADS if set (clamped to >= 1), otherwise
// hardware_concurrency.
int max_threads();

// Runs fn(chunk_index) for every chunk in [0, chunk_count). Chunks are
// independent units whose results must be written to per-chunk slots; the
// caller reduces them in chunk order, which keeps every pipeline output
// independent of the worker count.
void parallel_chunks(std::size_t chunk_count, const std::function<void(std::size_t)>& fn);

}  // namespace oitlab
