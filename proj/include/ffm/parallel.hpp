#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace ffm {

/// Worker count from the FFM_THREADS environment variable (0 or unset means
/// one worker per hardware thread).
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Indices are split into contiguous blocks,
/// one per worker; callers write results into per-index slots so output never
/// depends on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// SplitMix64 finalizer, used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t value) noexcept;

template <typename... Parts>
std::uint64_t derive_seed(std::uint64_t seed, Parts... parts) noexcept {
  std::uint64_t state = mix_seed(seed);
  ((state = mix_seed(state ^ mix_seed(static_cast<std::uint64_t>(parts) + 0x632be59bd9b4e019ULL))), ...);
  return state;
}

}  // namespace ffm
