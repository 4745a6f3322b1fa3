#pragma once

#include <cmath>
#include <cstdint>

namespace qbench {

// Counter-friendly generator used for all stochastic pieces. Substreams are
// derived from (seed, a, b, c) so parallel and serial runs produce identical
// draws regardless of scheduling.
struct SplitMix64 {
  std::uint64_t state;
  bool have_spare = false;
  double spare = 0.0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // standard normal via Box-Muller
  double gaussian() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double phi = 2.0 * 3.14159265358979323846 * u2;
    spare = r * std::sin(phi);
    have_spare = true;
    return r * std::cos(phi);
  }
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t a,
                            std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ull);
  h = mix64(h ^ (a + 0xbf58476d1ce4e5b9ull));
  h = mix64(h ^ (b + 0x94d049bb133111ebull));
  h = mix64(h ^ (c + 0x2545f4914f6cdd1dull));
  return SplitMix64(h);
}

}  // namespace qbench
