#pragma once

#include <cstddef>
#include <functional>

namespace tauber {

/// Worker count: hardware concurrency, capped by TAUBER_THREADS when set.
unsigned thread_budget();

/// Runs body(i) for i in [0, count). Each index writes only its own slot,
/// so results do not depend on scheduling. The first exception is rethrown
/// after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tauber
