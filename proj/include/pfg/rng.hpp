// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pfg {

using Rng = std::mt19937_64;

namespace detail {

// splitmix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Derive a child seed as a pure function of a master seed and up to two
/// stream indices. Used to give every (input combination, trial, gate) its
/// own independent stream, so results do not depend on evaluation order or
/// thread count.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0) noexcept {
  std::uint64_t h = detail::splitmix64(master);
  h = detail::splitmix64(h ^ detail::splitmix64(a));
  h = detail::splitmix64(h ^ detail::splitmix64(b));
  return h;
}

/// Seed for the per-gate stream inside one circuit trial. Keyed by the gate
/// id, not by evaluation order.
inline std::uint64_t gate_stream_seed(std::uint64_t trial_seed, std::string_view gate_id) noexcept {
  return detail::splitmix64(trial_seed ^ detail::fnv1a64(gate_id));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Normal draw; a zero (or negative) std is treated as a point mass and does
/// not consume engine state.
inline double sample_normal(Rng& rng, double mean, double std) {
  if (std <= 0.0) return mean;
  return std::normal_distribution<double>(mean, std)(rng);
}

}  // namespace pfg
