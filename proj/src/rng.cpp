#include "clockfcs/rng.hpp"

#include <cmath>

namespace clockfcs {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t base_seed, std::uint64_t stream_index) {
  // Distinct SplitMix64 start states per stream; SplitMix64's output mixing
  // decorrelates the resulting xoshiro states.
  std::uint64_t state = base_seed + 0x9e3779b97f4a7c15ULL * (stream_index + 1);
  for (auto& s : s_) s = splitmix64(state);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0))
    throw ValidationError("exponential rate must be positive");
  return -std::log1p(-uniform()) / rate;
}

int RngStream::categorical(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ValidationError("categorical weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0))
    throw ValidationError("categorical weights sum to zero");
  double x = uniform() * total;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    x -= weights[i];
    if (x < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace clockfcs
