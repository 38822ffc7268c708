// rng.hpp - deterministic random sampling.
//
// std::uniform_real_distribution and std::normal_distribution are
// implementation-defined; reproducibility across toolchains matters here
// (reports must be bit-identical across reruns), so the mapping from raw
// 64-bit draws to doubles is spelled out explicitly.
#pragma once

#include <cmath>
#include <cstdint>

#include "hardpair/vec.hpp"

namespace hardpair {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // splitmix64: passes BigCrush, two ops per draw, trivially seedable.
    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double angle() { return uniform(0.0, kTwoPi); }

    // Standard normal via Box-Muller; one value per call (the spare is
    // discarded so the draw count per call is fixed).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

  private:
    std::uint64_t state_;
};

}  // namespace hardpair
