#pragma once

#include <cstddef>
#include <functional>

namespace hostnet {

/// Worker count for data-parallel loops: HOSTNET_THREADS when set (floored
/// at 1), otherwise the number of logical CPUs.
std::size_t worker_count();

/// Runs fn(i) for every i in [0, n) across worker_count() threads and
/// blocks until all are done. Bodies must only touch per-index state;
/// callers do any order-sensitive reduction afterwards, in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hostnet
