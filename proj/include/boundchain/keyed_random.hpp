#pragma once

// Counter-based randomness. Every uniform the samplers consume is a pure
// function of a DrawKey, so a block of steps can be replayed exactly no
// matter how many draws each step happened to use.

#include <array>
#include <cstdint>
#include <stdexcept>

namespace boundchain {

struct DrawKey {
  std::uint64_t root_seed = 0;
  std::uint32_t block_id = 0;
  std::uint32_t branch_id = 0;  // 0 = shared stream
  std::uint64_t step_index = 0;
  std::uint32_t draw_index = 0;

  friend bool operator==(const DrawKey&, const DrawKey&) = default;
};

namespace detail {

using Philox4x64 = std::array<std::uint64_t, 4>;

__extension__ typedef unsigned __int128 uint128;

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const uint128 p = static_cast<uint128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

// Philox4x64-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
inline Philox4x64 philox4x64_10(Philox4x64 ctr, std::array<std::uint64_t, 2> key) {
  constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
  constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
  constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
  constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo64(kM0, ctr[0], hi0, lo0);
    mulhilo64(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

// Key words carry (seed, block, branch); counter words carry (step, draw, lane).
// The encoding is injective, so distinct DrawKeys never share a Philox block.
inline Philox4x64 keyed_block(const DrawKey& k, std::uint32_t lane) {
  const std::array<std::uint64_t, 2> key{
      k.root_seed, (static_cast<std::uint64_t>(k.block_id) << 32) | k.branch_id};
  const Philox4x64 ctr{k.step_index, k.draw_index, lane, 0};
  return philox4x64_10(ctr, key);
}

}  // namespace detail

/// Uniform real in [0, 1) with 53 bits of resolution. Uses lane 0 of the key.
inline double draw_uniform(const DrawKey& key) {
  const auto out = detail::keyed_block(key, 0);
  return static_cast<double>(out[0] >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound). Candidates come from lanes 1, 2, ... and out-of-range
/// candidates are rejected, so the result is exactly uniform. Independent of
/// draw_uniform on the same key.
inline std::uint64_t draw_index(const DrawKey& key, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("draw_index: bound must be positive");
  if (bound == 1) return 0;
  // 2^64 mod bound; candidates below it would make the residues uneven.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (std::uint32_t lane = 1;; ++lane) {
    const auto out = detail::keyed_block(key, lane);
    for (std::uint64_t x : out)
      if (x >= threshold) return x % bound;
  }
}

/// The draw stream of one chain step: a DrawKey with everything but draw_index fixed.
struct StepDraws {
  std::uint64_t root_seed = 0;
  std::uint32_t block_id = 0;
  std::uint32_t branch_id = 0;
  std::uint64_t step_index = 0;

  DrawKey key(std::uint32_t draw) const {
    return DrawKey{root_seed, block_id, branch_id, step_index, draw};
  }
  double uniform(std::uint32_t draw) const { return draw_uniform(key(draw)); }
  std::uint64_t index(std::uint32_t draw, std::uint64_t bound) const {
    return draw_index(key(draw), bound);
  }

  StepDraws on_branch(std::uint32_t branch) const {
    return StepDraws{root_seed, block_id, branch, step_index};
  }
};

}  // namespace boundchain
