#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace amplicap {

/// Caps the number of worker threads used by library routines. 0 restores the
/// default (hardware concurrency, or AMPLICAP_THREADS when set).
void set_thread_limit(unsigned n);
unsigned thread_limit();

/// Runs body(i) for i in [0, count). Work items must write to disjoint
/// outputs; callers reduce in index order so results do not depend on the
/// thread count. Nested calls run sequentially on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// SplitMix64 finalizer, used to derive independent RNG stream seeds.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t child);

}  // namespace amplicap
