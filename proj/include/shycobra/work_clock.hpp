#pragma once

#include <cstdint>

namespace shycobra::work {

/// Deterministic count of expensive primitive evaluations (constraint evaluations, collision
/// checks, IK solves) on the calling thread. Used as a hardware-independent planning clock.
inline thread_local std::uint64_t units = 0;

inline void add(std::uint64_t n = 1) { units += n; }

/// Seconds charged per work unit by the modelled clock.
inline constexpr double kSecondsPerUnit = 1e-6;

}  // namespace shycobra::work
