#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace govsim::rng {

// splitmix64 step (Steele/Lea/Flood; Vigna's fixed-increment variant).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += UINT64_C(0x9E3779B97F4A7C15));
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (i * 8)) & 0xFFu;
    h *= UINT64_C(1099511628211);
  }
  return h;
}

inline std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= UINT64_C(1099511628211);
  }
  return h;
}

// One named draw stream. Streams are keyed by (seed, purpose, epoch, step),
// so consumption in one stream never shifts draws in another. All
// distributions are implemented here rather than via <random>, whose
// distribution outputs are not pinned by the standard.
class Stream {
 public:
  Stream(std::uint64_t seed, std::string_view purpose, std::uint64_t epoch,
         std::uint64_t step) {
    std::uint64_t h = UINT64_C(0xcbf29ce484222325);
    h = fnv1a(h, purpose);
    h = fnv1a(h, seed);
    h = fnv1a(h, epoch);
    h = fnv1a(h, step);
    state_ = h;
    splitmix64(state_);  // diffuse the hash before first use
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Box-Muller, always two u64 draws per value (no cached second value).
  double next_normal(double mean, double sd) {
    double u1 = 1.0 - next_unit();  // (0, 1]
    double u2 = next_unit();
    double mag = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * mag * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Knuth's product-of-uniforms method; fine for the small means used here.
  std::int64_t next_poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= next_unit();
    } while (p > limit);
    return k - 1;
  }

  // Uniform index in [0, n) via 128-bit multiply; n must be >= 1.
  std::size_t next_index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace govsim::rng
