#pragma once

#include <cstddef>
#include <functional>

namespace aspectlab {

/// Number of worker threads to use. Reads ASPECT_LAB_THREADS once (values
/// below 1 are treated as 1); falls back to the hardware concurrency.
std::size_t thread_cap();

/// Run fn(i) for i in [0, n). Work is split into contiguous chunks and each
/// result must be written to a slot addressed by i, so the outcome is
/// identical for any thread count. Runs inline when n is small or the cap
/// is 1.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace aspectlab
