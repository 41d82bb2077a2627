#pragma once

#include "mhd_inhibit/kinematics.hpp"

#include <cstdint>
#include <random>

namespace mhdi {

/// Uniform double in [0, 1) from the top 53 bits of one draw; identical on every platform.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1));
}

struct RandomFieldSpec {
    int modes = 6;
    int kmax = 2;   // horizontal integer wavenumbers in [-kmax, kmax]
    int nmax = 2;   // vertical indices in [1, nmax]
    double amplitude = 1.0;
};

/// Band-limited solenoidal boundary-vanishing field, deterministic in the seed.
SolenoidalField random_solenoidal(const SlabDomain& domain, std::uint64_t seed, const RandomFieldSpec& spec = {});

}  // namespace mhdi
