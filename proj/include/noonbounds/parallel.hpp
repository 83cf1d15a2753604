// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace noonbounds {

/// Worker count: NOONBOUNDS_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads. Results
/// must be written to per-index slots; the first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// SplitMix64 finalizer; mixes (seed, stream) into an independent 64-bit key.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace noonbounds
