#include "rd/rng.hpp"

#include <cmath>
#include <numbers>

namespace rd {
namespace philox {

namespace {

constexpr uint32_t kM0 = 0xD2511F53u;
constexpr uint32_t kM1 = 0xCD9E8D57u;
constexpr uint32_t kW0 = 0x9E3779B9u;
constexpr uint32_t kW1 = 0xBB67AE85u;

inline void round_once(Counter& c, uint32_t& k0, uint32_t& k1) {
  const uint64_t p0 = static_cast<uint64_t>(kM0) * c.v[0];
  const uint64_t p1 = static_cast<uint64_t>(kM1) * c.v[2];
  const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
  const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
  Counter out;
  out.v[0] = hi1 ^ c.v[1] ^ k0;
  out.v[1] = lo1;
  out.v[2] = hi0 ^ c.v[3] ^ k1;
  out.v[3] = lo0;
  c = out;
  k0 += kW0;
  k1 += kW1;
}

inline Counter block(uint64_t seed, uint32_t chain, uint64_t step, uint32_t mode,
                     uint32_t lane) {
  Counter ctr{{static_cast<uint32_t>(step), static_cast<uint32_t>(step >> 32),
               mode, chain ^ (lane << 16)}};
  return philox4x32(ctr, static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32));
}

inline double to_unit(uint32_t a, uint32_t b) {
  const uint64_t x = (static_cast<uint64_t>(a) << 32) | b;
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

Counter philox4x32(Counter ctr, uint32_t key0, uint32_t key1) {
  for (int i = 0; i < 10; ++i) round_once(ctr, key0, key1);
  return ctr;
}

double normal(uint64_t seed, uint32_t chain, uint64_t step, uint32_t mode, uint32_t lane) {
  const Counter r = block(seed, chain, step, mode, lane);
  const double u1 = to_unit(r.v[0], r.v[1]);
  const double u2 = to_unit(r.v[2], r.v[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double uniform(uint64_t seed, uint32_t chain, uint64_t step, uint32_t mode, uint32_t lane) {
  const Counter r = block(seed, chain, step, mode, lane);
  return to_unit(r.v[0], r.v[1]);
}

}  // namespace philox
}  // namespace rd
