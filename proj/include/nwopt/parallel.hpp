#pragma once

#include <cstddef>
#include <functional>

namespace nwopt {

/// Number of hardware threads, at least 1.
std::size_t default_workers() noexcept;

/// Calls body(i) for every i in [0, count) on up to `workers` threads.
/// Indices are handed out dynamically, so body must only write state owned
/// by index i. The first exception thrown by any body is rethrown after all
/// threads have joined.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace nwopt
