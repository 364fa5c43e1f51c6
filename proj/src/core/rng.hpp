#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mordae {

// Deterministic random source.  mt19937_64 output is fixed by the C++ standard and
// the transforms below avoid std::*_distribution, whose streams are
// implementation-defined; results are therefore reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in (0, 1)
  double uniform() {
    return (static_cast<double>(gen_()) + 0.5) * 0x1p-64;
  }

  // standard normal via Box-Muller (cosine branch only, for a single fixed stream)
  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mordae
