#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "mwrn/config.hpp"

namespace mwrn::channel {

using cplx = std::complex<double>;

/// Roles keeping the per-slot noise and coefficient draws on disjoint streams.
enum class Role : std::uint64_t {
  kFrameBits = 1,
  kMacNoise = 2,
  kMacChannel = 3,
  kBcNoise = 4,
  kBcChannel = 5,
  kFadingGains = 6,
};

struct StreamId {
  std::uint64_t trial = 0;
  std::uint64_t slot = 0;
  Role role = Role::kFrameBits;
  std::uint64_t index = 0; // receiving user for BC streams, 0 otherwise
};

/// Seeded deterministic stream: identical (seed, id) replays the same
/// sequence, distinct ids give statistically independent sequences.
/// xoshiro256++ state derived from the id through splitmix64 absorption.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamId id) {
    std::uint64_t h = seed;
    (void)splitmix64(h);
    h ^= splitmix64(h) + id.trial;
    h ^= splitmix64(h) + id.slot;
    h ^= splitmix64(h) + static_cast<std::uint64_t>(id.role);
    h ^= splitmix64(h) + id.index;
    for (auto& w : s_) w = splitmix64(h);
  }

  std::uint64_t next_u64() {
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

  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Marsaglia's polar method, one value cached.
  double next_gaussian() {
    if (has_cache_) {
      has_cache_ = false;
      return cache_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_unit() - 1.0;
      v = 2.0 * next_unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    cache_ = v * m;
    has_cache_ = true;
    return u * m;
  }

  cplx next_cgaussian(double total_variance) {
    if (total_variance <= 0.0) return {0.0, 0.0};
    const double sd = std::sqrt(total_variance / 2.0);
    const double re = next_gaussian();
    const double im = next_gaussian();
    return {sd * re, sd * im};
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
  double cache_ = 0.0;
  bool has_cache_ = false;
};

inline double gaussian_sample(RandomStream& stream, double variance) {
  if (variance <= 0.0) return 0.0;
  return std::sqrt(variance) * stream.next_gaussian();
}

/// Zero-mean complex coefficient with unit total variance; |h|^2 is
/// unit-mean exponential.
inline cplx rayleigh_coefficient(RandomStream& stream) { return stream.next_cgaussian(1.0); }

struct SlotChannel {
  cplx h_a{1.0, 0.0};
  cplx h_b{1.0, 0.0};
  std::vector<cplx> g; // index 1..L maps receiving user -> BC coefficient
};

/// Coefficients for MAC slot `slot` (1-based, 1..L-1) of one trial.  AWGN
/// configs give unit coefficients; Rayleigh draws fresh MAC and per-user BC
/// coefficients from disjoint streams.
SlotChannel slot_channel(const SimConfig& cfg, std::uint64_t trial, int slot);

/// BC coefficient seen by `user` in `slot`, without materializing the full
/// per-user map.  Matches slot_channel(cfg, trial, slot).g[user].
cplx bc_coefficient(const SimConfig& cfg, std::uint64_t trial, int slot, int user);

inline int slots_per_phase(int users) { return users - 1; }

} // namespace mwrn::channel
