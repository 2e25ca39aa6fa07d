#pragma once

#include <cstdint>
#include <functional>

namespace curvregge {

/// Set the worker count used by parallel loops (assembly, error norms).
/// 0 restores the default (all hardware threads). Results are independent
/// of the thread count: parallel phases only fill disjoint slots and all
/// reductions run serially in a fixed order.
void set_num_threads(int n);
int num_threads();

/// Run fn(i) for i in [0, n). Chunked across num_threads() workers;
/// serial when n is small or one thread is configured.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace curvregge
