#pragma once

#include <cstdint>
#include <random>

// Reproducible random numbers.
//
// The engine is std::mt19937_64 (exactly specified by the standard); the
// distribution transforms are implemented here rather than taken from
// <random> because std::*_distribution algorithms are implementation-defined
// and would silently break bit-reproducibility across standard libraries.
//
// Monte Carlo drivers never share one generator across trials: each trial i
// of a logical stream gets its own engine seeded with
// substream_seed(seed, stream, i).  Results are then independent of how
// trials are partitioned over worker threads.

namespace exgeo {

// SplitMix64 step; also used to mix seed material.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t trial) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= stream * 0xda942042e4dd58b5ull;
  std::uint64_t b = splitmix64(s);
  s ^= trial * 0x2545f4914f6cdd1dull;
  std::uint64_t c = splitmix64(s);
  return a ^ (b << 1) ^ c;
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t u64() { return gen_(); }

  // Uniform on (0,1): top 53 bits, zero rejected so logs/powers are safe.
  double uniform() {
    for (;;) {
      const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53);
  }

  bool bernoulli(double p) { return uniform() < p; }

  int sign() { return (gen_() >> 63) ? +1 : -1; }

  // Standard normal, Box-Muller with a cached spare.
  double normal();

  // Poisson(mean) by Knuth's product method; means above 30 are split using
  // Poisson additivity so the exp() product never underflows.
  long poisson(double mean);

  // Gamma(shape, scale), Marsaglia-Tsang; shape < 1 handled by boosting.
  double gamma(double shape, double scale);

private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace exgeo
