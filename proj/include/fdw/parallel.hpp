#pragma once

#include <cstddef>
#include <functional>

namespace fdw {

/// Runs body(i) for i in [0, n) on up to `jobs` threads (0 = hardware
/// concurrency). The first exception thrown by any task is rethrown after all
/// workers stop.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

unsigned default_jobs();

}  // namespace fdw
