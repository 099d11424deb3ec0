#pragma once

#include <cstddef>
#include <functional>

namespace fracvar {

/// Worker count used for line-parallel operator application.
/// Resolution order: explicit set_thread_count(), FRACVAR_THREADS environment
/// variable, hardware concurrency. Results are bit-identical for any count.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs fn(i) for i in [0, n). Each index is processed by exactly one worker,
/// so writes to disjoint outputs are race-free and reduction-free.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fracvar
