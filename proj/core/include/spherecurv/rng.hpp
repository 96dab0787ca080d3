#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spherecurv {

// Seeded sampler with a fixed uniform->gaussian mapping (Box-Muller over the
// raw mt19937_64 stream), so identical seeds give identical samples on every
// platform. std::normal_distribution is implementation-defined and would
// break byte-identical reports.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {
    // 53-bit mantissa in [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 6.283185307179586476925286766559 * u2;
    cached_ = rad * std::sin(ang);
    have_cached_ = true;
    return rad * std::cos(ang);
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  double cached_ = 0;
  bool have_cached_ = false;
};

}  // namespace spherecurv
