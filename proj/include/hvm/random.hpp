#pragma once

#include <cstdint>
#include <random>

namespace hvm {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Counter-based child seed: the same (master, counter) always maps to the
/// same value, and distinct counters give decorrelated streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) noexcept;

/// Seed drawn from the OS entropy source, for runs without an explicit seed.
std::uint64_t fresh_seed();

}  // namespace hvm
