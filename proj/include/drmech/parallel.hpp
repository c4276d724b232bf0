#pragma once

#include <functional>

namespace drmech {

/// Worker cap: DRMECH_THREADS when set (>=1), else hardware concurrency.
int max_threads();

/// Runs fn(0..n-1) across up to max_threads() workers. Exceptions from
/// workers are rethrown on the calling thread (first one wins).
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace drmech
