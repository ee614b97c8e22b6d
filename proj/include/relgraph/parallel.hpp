#pragma once

#include <cstdint>
#include <functional>

namespace relgraph {

// Global worker cap used by parallel_for. Defaults to 1; the CLI raises it
// with --threads.
void set_thread_count(int n);
int thread_count();

// Runs body(begin, end) over contiguous ranges covering [0, n). With one
// worker this is a single call; with more it spawns workers and joins them
// all before returning. Every call site writes per-index outputs only, so
// results are identical for any worker count.
void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& body);

}  // namespace relgraph
