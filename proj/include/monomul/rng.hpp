#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace monomul {

inline constexpr std::uint64_t kDefaultSeed = 12345;

// Seeded draw helper. Distributions are hand-rolled from raw mt19937_64 bits
// so outputs are identical across standard-library implementations (the
// std::uniform_*_distribution layouts are not portable).
class DrawGen {
  public:
    explicit DrawGen(std::uint64_t seed = kDefaultSeed) : eng_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi] (small ranges; modulo bias negligible).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // Uniform on the complex disk of given radius (rejection-free via sqrt law).
    std::complex<double> complex_in_disk(double radius = 1.0) {
        double r = radius * std::sqrt(uniform());
        double phi = uniform(0.0, 6.283185307179586476925286766559);
        return std::polar(r, phi);
    }

    // Uniform modulus in [rlo, rhi), uniform phase.
    std::complex<double> complex_in_annulus(double rlo, double rhi) {
        return std::polar(uniform(rlo, rhi), uniform(0.0, 6.283185307179586476925286766559));
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

} // namespace monomul
