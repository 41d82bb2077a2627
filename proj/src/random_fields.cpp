#include "mhd_inhibit/random_fields.hpp"

#include <cmath>
#include <numbers>

namespace mhdi {

SolenoidalField random_solenoidal(const SlabDomain& domain, std::uint64_t seed, const RandomFieldSpec& spec) {
    if (spec.modes < 1 || spec.kmax < 0 || spec.nmax < 1)
        throw InvalidArgument("random_solenoidal: invalid band limits");
    std::mt19937_64 rng(seed);
    std::vector<TrigMode> modes;
    for (int q = 0; q < spec.modes; ++q) {
        TrigMode m;
        m.kind = uniform01(rng) < 0.5 ? TrigMode::Kind::poloidal : TrigMode::Kind::toroidal;
        m.k1 = uniform_int(rng, -spec.kmax, spec.kmax);
        m.k2 = uniform_int(rng, -spec.kmax, spec.kmax);
        m.n = uniform_int(rng, 1, spec.nmax);
        m.amplitude = spec.amplitude * uniform(rng, -1.0, 1.0);
        m.phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        const double k1 = m.k1 / domain.L1, k2 = m.k2 / domain.L2;
        const double kn = std::hypot(k1, k2);
        if (kn > 0.0) {
            m.d = {k1 / kn, k2 / kn, 0.0};
        } else {
            const double t = uniform(rng, 0.0, 2.0 * std::numbers::pi);
            m.d = {std::cos(t), std::sin(t), 0.0};
        }
        modes.push_back(m);
    }
    return SolenoidalField(domain, std::move(modes));
}

}  // namespace mhdi
