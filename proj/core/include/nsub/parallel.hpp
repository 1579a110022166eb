#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace nsub {

/// Worker count: NEWTON_SUBLEVEL_THREADS when set (>= 1), else the hardware concurrency.
unsigned default_threads();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = default_threads()).
/// Bodies must only write to per-index state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

/// Per-chunk partial results for a fixed chunk size; the chunking depends only
/// on n and chunk, never on the worker count, so reductions over the returned
/// vector in index order are reproducible.
template <class T>
std::vector<T> chunked(std::size_t n, std::size_t chunk, const std::function<T(std::size_t, std::size_t)>& f,
                       unsigned threads = 0) {
  std::size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<T> out(nchunks);
  parallel_for(
      nchunks, [&](std::size_t c) { out[c] = f(c * chunk, std::min(n, (c + 1) * chunk)); }, threads);
  return out;
}

std::uint64_t splitmix64(std::uint64_t x);

/// Uniform double in [0, 1) derived from (seed, stream, index) only.
double hashed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace nsub
