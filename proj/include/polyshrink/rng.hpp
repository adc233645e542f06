#pragma once

#include <cmath>
#include <cstdint>

namespace polyshrink::rng {

// splitmix64: tiny seedable generator with a strong mixing finalizer.
// Used per Monte Carlo chunk so that streams depend only on (seed, chunk).
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

// Standard normal variates via the Marsaglia polar method (rejection-based,
// exact distribution given exact uniforms).
class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * rng_.next_double() - 1.0;
            v = 2.0 * rng_.next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        have_spare_ = true;
        return u * scale;
    }

  private:
    SplitMix64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace polyshrink::rng
