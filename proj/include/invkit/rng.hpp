#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "invkit/matrix.hpp"

namespace invkit {

// Reproducible random source. mt19937_64 has a standard-mandated sequence, and
// the uniform/gaussian transforms below avoid std::*_distribution (whose
// output is implementation-defined), so streams are identical across
// compilers for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Uniform in [0, 1). 53-bit mantissa fill.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Box-Muller; one value per call, cached pair discarded for simplicity.
  double gaussian() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  Vector gaussian_vector(std::size_t n) {
    Vector v(n);
    for (auto& x : v) x = gaussian();
    return v;
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace invkit
