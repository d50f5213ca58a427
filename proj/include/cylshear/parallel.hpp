#pragma once

#include <cstddef>
#include <functional>

namespace cylsh {

/// Worker count used by the compute modules (default 1).
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Runs body(begin, end, worker) over [0, n) split into thread_count()
/// contiguous chunks. The split depends only on n and the thread count, so
/// per-worker partial results merged in worker order are reproducible.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace cylsh
