#pragma once

#include <cstddef>
#include <functional>

namespace hofa {

// 0 means "use hardware concurrency".
void set_thread_count(int threads);
int thread_count();

// Runs body(i) for every i in [0, count). Work is split into contiguous chunks;
// callers write results by index and reduce serially so output never depends
// on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hofa
