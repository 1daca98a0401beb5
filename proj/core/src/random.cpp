// SPDX-License-Identifier: Apache-2.0
#include "anchorsec/random.hpp"

namespace anchorsec {

std::uint64_t mix64(std::uint64_t value) noexcept {
  value += 0x9e3779b97f4a7c15ULL;
  value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
  value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
  return value ^ (value >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial_index,
                          Stream purpose) noexcept {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ trial_index);
  return mix64(h ^ static_cast<std::uint64_t>(purpose));
}

Rng make_stream(std::uint64_t master_seed, std::uint64_t trial_index, Stream purpose) {
  return Rng(derive_seed(master_seed, trial_index, purpose));
}

}  // namespace anchorsec
