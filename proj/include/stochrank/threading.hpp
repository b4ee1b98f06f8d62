#pragma once

#include <functional>

#include "stochrank/types.hpp"

namespace stochrank {

// Worker cap: explicit argument if > 0, else STOCHRANK_THREADS, else the
// hardware count. Results never depend on the cap; it only bounds wall time.
Index resolve_threads(Index requested);

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index owns
// its output slot, so parallel execution is deterministic.
void parallel_for(Index count, Index threads, const std::function<void(Index)>& fn);

}  // namespace stochrank
