#ifndef UWLOC_RNG_HPP
#define UWLOC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace uwloc {

// Deterministic random stream. All draws go through explicit helpers built
// on raw mt19937_64 output, so sequences are reproducible across platforms
// and standard-library versions (std::*_distribution is not portable).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(mix(seed)) {}

  // Independent substream for (master seed, index), e.g. one per trial.
  static RngStream derive(std::uint64_t master, std::uint64_t index) {
    return RngStream(mix(master + 0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double normal(double mean = 0.0, double sd = 1.0) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + sd * spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return mean + sd * r * std::cos(a);
  }

  double exponential(double rate) {
    double u = uniform01();
    while (u <= 0.0) u = uniform01();
    return -std::log(u) / rate;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer; decorrelates nearby seeds.
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace uwloc

#endif
