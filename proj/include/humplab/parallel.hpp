#pragma once

#include <functional>

namespace humplab {

/// Worker count: `requested` if positive, else the HUMPLAB_THREADS
/// environment variable, else the hardware concurrency (at least 1).
int resolve_threads(int requested);

/// Run fn(i) for i in [0, count) on `threads` workers. Work items are
/// handed out through an atomic counter; fn must be safe to call
/// concurrently for distinct i.
void parallel_for(long count, int threads, const std::function<void(long)>& fn);

} // namespace humplab
