// Splittable pseudorandom streams for reproducible parallel Monte Carlo.
// One SplitMix64 stream per replication, keyed by (base_seed, index), so
// results do not depend on worker count or scheduling order.
#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>

namespace mildex {

// SplitMix64 (Steele/Lea/Flood 2014, Vigna's fixed-increment variant).
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53 random bits
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in (0,1], safe as a log() argument
    double next_open_unit() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

// Collision-free per-replication seed: index enters through an odd-multiplier
// bijection, then one SplitMix64 finalizer round. Distinct indices under the
// same base seed always map to distinct stream seeds.
inline std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t index) {
    std::uint64_t z = base_seed ^ (0x9E3779B97F4A7C15ull * (index + 0x632BE59BD9B4E019ull));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

enum class NoiseKind { Gaussian, Rademacher, Uniform };

// Draws i.i.d. noise with mean 0 and variance sigma^2. Gaussian uses
// Box-Muller on the raw stream (the library normal_distribution is
// implementation-defined, which would break cross-platform repeatability).
class NoiseSampler {
  public:
    NoiseSampler(NoiseKind kind, double sigma, std::uint64_t seed)
        : rng_(seed), kind_(kind), sigma_(sigma) {}

    double next() {
        switch (kind_) {
            case NoiseKind::Gaussian: return sigma_ * gaussian();
            case NoiseKind::Rademacher: return (rng_.next() & 1u) ? sigma_ : -sigma_;
            case NoiseKind::Uniform:
                // [-sqrt(3), sqrt(3)] scaled: variance sigma^2
                return sigma_ * std::numbers::sqrt3 * (2.0 * rng_.next_unit() - 1.0);
        }
        return 0.0;
    }

  private:
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.next_open_unit();
        const double u2 = rng_.next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    SplitMix64 rng_;
    NoiseKind kind_;
    double sigma_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace mildex
