#pragma once

#include <cstddef>
#include <functional>

namespace tzlab {

/// Worker cap used by every parallel loop in the library. 0 means
/// std::thread::hardware_concurrency(). Results never depend on this value.
void set_max_jobs(std::size_t jobs);
std::size_t max_jobs();

/// Calls body(i) for i in [0, n), spreading indices over up to max_jobs()
/// threads. The first exception thrown by any call is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tzlab
