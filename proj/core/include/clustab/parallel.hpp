#pragma once

#include <cstddef>
#include <functional>

namespace clustab {

/// Run tasks 0..n_tasks-1 on `workers` threads pulling from a shared atomic
/// counter. Tasks must write to disjoint slots; the first exception is
/// rethrown after all threads join. workers <= 1 runs inline.
void run_tasks(std::size_t n_tasks, int workers,
               const std::function<void(std::size_t)>& task);

}  // namespace clustab
