#include "shs6v/rng.hpp"

namespace shs6v {

namespace {
constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  std::uint64_t p = std::uint64_t(a) * b;
  hi = std::uint32_t(p >> 32);
  lo = std::uint32_t(p);
}
}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

double uniform01(std::uint64_t seed, Stream kind, std::int64_t a, std::int64_t b) {
  auto ua = std::uint64_t(a), ub = std::uint64_t(b);
  std::array<std::uint32_t, 4> ctr{std::uint32_t(ua), std::uint32_t(ua >> 32), std::uint32_t(ub),
                                   std::uint32_t(ub >> 32) ^ (std::uint32_t(kind) << 24)};
  std::array<std::uint32_t, 2> key{std::uint32_t(seed), std::uint32_t(seed >> 32)};
  auto r = philox4x32(ctr, key);
  std::uint64_t bits = (std::uint64_t(r[0]) << 21) ^ (std::uint64_t(r[1]) >> 11);
  return double(bits & ((1ull << 53) - 1)) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t r) {
  std::array<std::uint32_t, 4> ctr{std::uint32_t(r), std::uint32_t(r >> 32), 0x5EEDu, std::uint32_t(Stream::Replica)};
  auto o = philox4x32(ctr, {std::uint32_t(master), std::uint32_t(master >> 32)});
  return (std::uint64_t(o[0]) << 32) | o[1];
}

}  // namespace shs6v
