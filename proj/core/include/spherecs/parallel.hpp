#pragma once

#include <cstddef>
#include <functional>

namespace spherecs {

/// Worker count used by parallel_for. Defaults to the SPHERECS_THREADS environment
/// variable when set, otherwise std::thread::hardware_concurrency().
unsigned thread_count();
void set_thread_count(unsigned n);

/// Runs body(i) for i in [0, n) on up to thread_count() threads using contiguous
/// static chunks. Exceptions from any worker are rethrown (the first by index).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace spherecs
