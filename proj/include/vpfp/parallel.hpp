#pragma once

#include <cstddef>
#include <functional>

namespace vpfp {

/// Number of worker threads used by parallel_for. Initialised from the
/// VPFP_THREADS environment variable (default 1) and overridable.
int thread_count();
void set_thread_count(int n);

/// Runs body(i) for i in [0, n). Work items are statically partitioned into
/// contiguous blocks, so any result written to slot i is independent of the
/// thread count. Exceptions from workers are rethrown (lowest index wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (tree) summation; the association order depends only on the
/// length of the input.
double pairwise_sum(const double* x, std::size_t n);

}  // namespace vpfp
