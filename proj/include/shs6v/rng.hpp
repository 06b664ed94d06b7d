#pragma once

#include <array>
#include <cstdint>

namespace shs6v {

// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

enum class Stream : std::uint32_t { Site = 0, Source = 1, Init = 2, Replica = 3 };

// Counter-addressed uniforms: the same (seed, stream, a, b) always yields the same value.
double uniform01(std::uint64_t seed, Stream kind, std::int64_t a, std::int64_t b);

// Seed for replica r derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t r);

struct Environment {
  std::uint64_t seed = 0;
  // One variate per (t, y); the Bernoulli outcome compares it with whichever mean applies.
  double site(long t, long y) const { return uniform01(seed, Stream::Site, t, y); }
  double source(long t) const { return uniform01(seed, Stream::Source, t, 0); }
  double init(long y) const { return uniform01(seed, Stream::Init, y, 0); }
};

}  // namespace shs6v
