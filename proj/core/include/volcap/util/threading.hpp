// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace volcap {

int hardware_threads();

/// Runs fn(begin..end) split into contiguous chunks across worker threads
/// and joins them all. Chunk boundaries depend only on (count, threads),
/// so any reduction done per-chunk and merged in chunk order is
/// scheduling-independent.
void parallel_chunks(std::size_t count, int threads,
                     const std::function<void(std::size_t begin, std::size_t end, int chunk)>& fn);

}  // namespace volcap
