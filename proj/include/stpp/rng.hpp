#pragma once

#include <cstdint>
#include <random>

namespace stpp {

using Rng = std::mt19937_64;

/// Deterministic seed for one replication of one scenario. Distinct
/// (scenario, replication) pairs give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t scenario,
                          std::uint64_t replication);

}  // namespace stpp
