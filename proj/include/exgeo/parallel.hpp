#pragma once

#include <functional>

namespace exgeo {

// Runs body(i) for i in [0, n) across `workers` threads (<=1: inline).
// Work items must be independent; callers get determinism by writing each
// item's result into its own pre-allocated slot and reducing sequentially
// afterwards.  The first exception thrown by any item is rethrown here.
void parallel_for(long n, int workers, const std::function<void(long)>& body);

// Worker count actually used for a request (0 = hardware concurrency).
int resolve_workers(int requested);

}  // namespace exgeo
