#pragma once

#include <cstddef>
#include <functional>

namespace qgeo {
namespace threading {

// Worker cap: min(hardware_concurrency, QGEO_THREADS if set). At least 1.
std::size_t worker_count();

// Runs fn(i) for i in [0, count). Work items must be independent; results a
// caller collects into per-index slots are identical for any worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace threading
}  // namespace qgeo
