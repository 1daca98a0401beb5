// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace anchorsec {

using Rng = std::mt19937_64;

/// Purposes of the independent streams that make up one trial.
enum class Stream : std::uint64_t {
  deployment = 1,
  attack = 2,
  detection = 3,
  evaluation = 4,
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t value) noexcept;

/// Seed derived from (master seed, trial index, purpose); the three inputs
/// are folded through mix64 so neighbouring trials get unrelated streams.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial_index,
                          Stream purpose) noexcept;

Rng make_stream(std::uint64_t master_seed, std::uint64_t trial_index, Stream purpose);

}  // namespace anchorsec
