#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace bcc {

/// Counter-based generator: output i is the splitmix64 finalizer applied to
/// seed + (i+1) * 0x9e3779b97f4a7c15. Normal variates come from Box-Muller
/// on consecutive uniforms (no caching), so every draw is a pure function of
/// (seed, draw index). Trial streams are derived with derive_stream so that
/// batch partitioning cannot change results.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() { return mix(seed_ + (++counter_) * kGamma); }

    /// uniform in (0, 1]
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// standard normal via Box-Muller (cosine branch; two uniforms per draw)
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    /// complex Gaussian with independent N(0,1) real and imaginary parts,
    /// so E|z|^2 = 2; one Box-Muller pair per draw
    std::complex<double> complex_normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        return {rad * std::cos(2.0 * kPi * u2), rad * std::sin(2.0 * kPi * u2)};
    }

    static std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
        return mix(mix(seed) ^ (stream + 1) * kGamma);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    static constexpr double kPi = 3.14159265358979323846;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace bcc
