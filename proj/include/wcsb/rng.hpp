#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace wcsb {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds from (master, stream id).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based split: stream i of a master seed does not depend on how many other
// streams were drawn or in which order.
inline Rng make_stream(std::uint64_t master, std::uint64_t stream, std::uint64_t salt = 0) {
  const std::uint64_t a = splitmix64(master ^ splitmix64(salt + 0x51ED270B27ULL));
  const std::uint64_t b = splitmix64(a + splitmix64(stream));
  std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32)};
  return Rng(seq);
}

// Complex Gaussian with E|z|^2 = 1.
inline std::complex<double> complex_gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

}  // namespace wcsb
