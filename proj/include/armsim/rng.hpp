#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "armsim/types.hpp"

namespace armsim {

/// Deterministic Gaussian stream. The engine (mt19937_64) and the
/// Box-Muller transform below are both fully specified, so the same seed
/// yields the same stream on every platform. std::normal_distribution is
/// deliberately avoided: its output sequence is implementation-defined.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

    /// Standard normal draw.
    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1], u2 in [0, 1): 53-bit uniforms built directly from
        // engine words.
        const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * kPi * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

    /// splitmix64 mix, used to derive independent per-trial seeds.
    static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
        std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace armsim
