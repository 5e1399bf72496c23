// Deterministic random plumbing. SplitMix64 is the only engine; every draw
// (uniform integers, Poisson counts, Gaussians) is built on it by hand so a
// (seed, replicate) pair maps to the same scenario on every run and every
// thread count. Standard-library distributions are avoided on purpose: their
// draw sequences are implementation-defined.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace jumphit {

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(state_);
  }

  // Unbiased uniform draw from {0, ..., bound-1} by masked rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform draw from empty range");
    if (bound == 1) return 0;
    std::uint64_t mask = ~0ULL >> __builtin_clzll((bound - 1) | 1);
    for (;;) {
      std::uint64_t r = next() & mask;
      if (r < bound) return r;
    }
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log argument.
  double next_unit_positive() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Published subseed rule: replicate r of run seed s draws from
// mix(mix(s) + (r + 1) * 0x9E3779B97F4A7C15). Counter-derived, so parallel
// replicate execution is order-independent.
inline std::uint64_t derive_subseed(std::uint64_t seed, std::uint64_t replicate) {
  return splitmix64_mix(splitmix64_mix(seed) + (replicate + 1) * 0x9E3779B97F4A7C15ULL);
}

// Knuth product-of-uniforms Poisson draw. Fine for desk-scale means; the
// exp(-mean) factor underflows long before the guard trips.
inline std::uint64_t draw_poisson(SplitMix64& rng, double mean) {
  if (!(mean > 0)) throw std::invalid_argument("Poisson mean must be positive");
  if (mean > 500) throw std::invalid_argument("Poisson mean too large for product sampling");
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.next_unit_positive();
  } while (p > limit);
  return k - 1;
}

// k distinct values from {0, ..., population-1} via Floyd's sampling;
// returned sorted.
inline std::vector<std::uint64_t> sample_without_replacement(SplitMix64& rng, std::uint64_t population,
                                                             std::uint64_t k) {
  if (k > population) throw std::invalid_argument("sample size exceeds population");
  std::vector<std::uint64_t> chosen;
  chosen.reserve(k);
  for (std::uint64_t j = population - k; j < population; ++j) {
    std::uint64_t r = rng.next_below(j + 1);
    bool seen = false;
    for (std::uint64_t v : chosen)
      if (v == r) { seen = true; break; }
    chosen.push_back(seen ? j : r);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// Box-Muller (cosine branch only, one draw per call kept stateless).
inline double draw_gaussian(SplitMix64& rng) {
  double u1 = rng.next_unit_positive();
  double u2 = rng.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace jumphit
