// Deterministic index-parallel execution. Workers write into caller-owned
// slots keyed by index, so results do not depend on scheduling. The thread
// count comes from ORDINAL_TRANSPORT_THREADS (0 or unset means one thread
// per hardware core).

#pragma once

#include <functional>

namespace ot {

int resolve_thread_count();

// Runs fn(0..count-1), possibly concurrently. The first exception thrown by
// any worker is rethrown on the calling thread after all workers finish.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

inline void parallel_for(int count, const std::function<void(int)>& fn) {
  parallel_for(count, resolve_thread_count(), fn);
}

}  // namespace ot
