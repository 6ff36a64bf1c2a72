#pragma once

#include <cstdint>
#include <random>

namespace poisson_chaos {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Seed of the independent stream `stream` under `master`. Replication i of a
// campaign always draws from derive_seed(master, i), whatever the thread count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

Rng make_rng(std::uint64_t seed);

inline Rng make_stream(std::uint64_t master, std::uint64_t stream) {
  return make_rng(derive_seed(master, stream));
}

}  // namespace poisson_chaos
