#pragma once

#include <functional>

namespace elkin {

/// Worker count: ELKIN_THREADS if set, else hardware concurrency (>= 1).
int thread_count();

/// Runs fn(begin, end, worker) over a static partition of [0, n).
/// Workers write to disjoint index ranges, so results are deterministic.
void parallel_chunks(int n, const std::function<void(int, int, int)>& fn);

}  // namespace elkin
