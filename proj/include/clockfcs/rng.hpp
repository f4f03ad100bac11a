#pragma once

#include <cstdint>
#include <vector>

#include "clockfcs/errors.hpp"

namespace clockfcs {

// xoshiro256++ generator with SplitMix64 per-stream seeding.
//
// Hand-rolled rather than <random> because standard-library distributions
// are not bit-stable across implementations, and the trajectory oracle
// promises bit-identical results for a given (seed, stream) on every
// platform. Distinct stream indices give independently seeded generators,
// so trajectories can be dealt to threads in any order.
class RngStream {
 public:
  RngStream(std::uint64_t base_seed, std::uint64_t stream_index);

  std::uint64_t next_u64();

  double uniform();  // [0, 1) with 53-bit resolution
  double uniform(double lo, double hi);
  double exponential(double rate);

  // Index drawn proportionally to non-negative weights; throws
  // ValidationError when the weights sum to zero (absorbing state).
  int categorical(const std::vector<double>& weights);

 private:
  std::uint64_t s_[4];
};

}  // namespace clockfcs
