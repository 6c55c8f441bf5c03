#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace longwave {

// Stateless 64-bit mixer used to derive independent per-replication seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 0x6a09e667f3bcc909ULL));
}

// Deterministic Gaussian generator: mt19937_64 + Box-Muller. We do not use
// std::normal_distribution because its algorithm is implementation-defined and
// simulator output must be bit-reproducible for a given seed.
class GaussianRng {
public:
  explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in (0, 1].
  double uniform01() {
    return 1.0 - static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_ = true;
    return r * std::cos(a);
  }

private:
  std::mt19937_64 eng_;
  bool have_ = false;
  double cached_ = 0.0;
};

}  // namespace longwave
