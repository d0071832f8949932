#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace vacred {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw, SC'11).
// Stateless: each 128-bit counter / 64-bit key pair maps to an independent
// 128-bit block, so draws can be evaluated in any order on any number of
// workers and still reproduce bit-exactly.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const std::array<std::uint32_t, 4> next = {
          static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
          static_cast<std::uint32_t>(p0),
      };
      ctr = next;
    }
    return ctr;
  }
};

// Stream derivation serialized into output metadata. Counter layout:
// (step, draw, trajectory_lo32, trajectory_hi32), key = (seed_lo32, seed_hi32);
// each block feeds Box-Muller through its top 53 bits.
inline constexpr const char* kRngId = "philox4x32-10/ctr(step,draw,traj)/box-muller/v1";

namespace rng_detail {

inline double unit_open_low(std::uint64_t x) {
  // (0, 1]; safe under log().
  return 1.0 - static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline double unit_closed_low(std::uint64_t x) {
  // [0, 1).
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline std::uint64_t join(std::uint32_t hi, std::uint32_t lo) {
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

}  // namespace rng_detail

// Three independent standard-normal kicks for (seed, trajectory, step).
inline std::array<double, 3> standard_normal_kicks(std::uint64_t seed,
                                                   std::uint64_t trajectory,
                                                   std::uint32_t step) {
  using namespace rng_detail;
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                            static_cast<std::uint32_t>(seed >> 32)};
  const std::uint32_t traj_lo = static_cast<std::uint32_t>(trajectory);
  const std::uint32_t traj_hi = static_cast<std::uint32_t>(trajectory >> 32);
  const auto b0 = Philox4x32::block({step, 0u, traj_lo, traj_hi}, key);
  const auto b1 = Philox4x32::block({step, 1u, traj_lo, traj_hi}, key);

  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double r0 = std::sqrt(-2.0 * std::log(unit_open_low(join(b0[0], b0[1]))));
  const double a0 = two_pi * unit_closed_low(join(b0[2], b0[3]));
  const double r1 = std::sqrt(-2.0 * std::log(unit_open_low(join(b1[0], b1[1]))));
  const double a1 = two_pi * unit_closed_low(join(b1[2], b1[3]));
  // Fourth normal (r1 * sin a1) is discarded.
  return {r0 * std::cos(a0), r0 * std::sin(a0), r1 * std::cos(a1)};
}

}  // namespace vacred
