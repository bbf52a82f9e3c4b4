#pragma once

#include <cstdint>
#include <functional>

namespace levilab {

// Sampling kernels run either as a plain loop (the reference used by tests)
// or as an OpenMP parallel-for.  Work items are indexed and own their state;
// results land in index-addressed slots, so both modes produce identical
// output regardless of thread count.
enum class ExecMode { serial, parallel };

// Worker cap: min(omp_get_max_threads(), LEVILAB_THREADS if set).
int worker_count();

void run_indexed(long count, ExecMode mode, const std::function<void(long)>& fn);

// Deterministic per-item RNG seed derived from a master seed (splitmix64).
std::uint64_t item_seed(std::uint64_t master, std::uint64_t index);

} // namespace levilab
