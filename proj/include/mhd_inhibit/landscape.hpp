#pragma once

// Sign of the total potential energy variation delta_EP = V_M / 2 - V_star
// on explicit test fields: a destabilizing witness below the threshold and a
// randomized certificate above it, for both the continuous and the
// two-layer stratification.

#include "mhd_inhibit/energy.hpp"
#include "mhd_inhibit/random_fields.hpp"
#include "mhd_inhibit/threshold.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mhdi {

/// Smooth vertical shape with two derivatives on [a, b].
struct VerticalProfile {
    double a = 0.0;
    double b = 1.0;
    std::function<double(double)> f;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

/// Sine series through the grid values of psi (zero endpoints), truncated to `modes` terms.
VerticalProfile sine_series_profile(const std::vector<double>& psi, double a, double b, int modes = 64);

/// C^2 version of the piecewise-linear two-layer maximizer on [-l, h]: the kink at 0
/// is replaced by a quintic blend of the slopes over |s| < delta.
VerticalProfile smoothed_kink(double h, double l, double delta);

/// psi times a C^2 cutoff that rises from 0 to 1 over `width` at each end; the
/// product and its first derivative vanish at the endpoints.
VerticalProfile tapered(const VerticalProfile& psi, double width);

/// v = psi'(y3) cos(z) d + (d . k) psi(y3) sin(z) e3 with the wave of test_wave(i, direction).
/// Divergence-free by construction; carries its exact gradient. Throws when the
/// phase has fewer than 8 grid points per wavelength.
VectorField3 build_test_field(int i, const VerticalProfile& psi, const Grid3D& grid,
                              const Vec3& direction = {0.0, 0.0, 1.0});
/// Overload for a grid function psi on [grid.domain.a, grid.domain.b].
VectorField3 build_test_field(int i, const std::vector<double>& psi, const Grid3D& grid,
                              const Vec3& direction = {0.0, 0.0, 1.0});

/// g int rho' v3^2 / (lambda ||d_n v||^2) by grid quadrature.
double field_rayleigh_quotient(const VectorField3& v, const Profile1D& density, const PhysicalParams& params,
                               const Grid3D& grid, const Vec3& direction);

enum class Condition { stability, instability };

struct LandscapeVerdict {
    Condition condition = Condition::instability;
    double functional_value = 0.0;  // delta_EP at the tested field
    double quadratic_part = 0.0;
    double cubic_part = 0.0;
    double epsilon = 0.0;
    int i = 0;              // wave index of the witness (0 for random fields)
    std::uint64_t seed = 0; // random-field seed (stability side)
    std::string witness;
    bool satisfied = false;
};

struct LandscapeOptions {
    int n_threshold = 1001;
    int n1 = 8;
    int n3 = 65;
    int max_i = 256;
    double dominance = 10.0;
    double taper_width = 0.05;  // fraction of the height
    RandomFieldSpec random{4, 2, 2, 1.0};
    int grid_h = 16;  // horizontal nodes for random fields
    int threads = 1;
};

/// Requires |M3| < m_N, or M3 = 0 with any horizontal field.
LandscapeVerdict instability_witness(const Profile1D& density, const SlabDomain& domain,
                                     const PhysicalParams& params, double eps, const LandscapeOptions& opt = {});

/// Requires |M3| > m_N. Trial t uses seed + t.
std::vector<LandscapeVerdict> stability_certificate(const Profile1D& density, const SlabDomain& domain,
                                                    const PhysicalParams& params, int trials, double eps_max,
                                                    std::uint64_t seed, const LandscapeOptions& opt = {});

/// Two-layer problem on (-l, h) with the interface at 0. The instability side
/// returns one verdict, the stability side one per trial.
std::vector<LandscapeVerdict> stratified_landscape(const PhysicalParams& params, double h, double l,
                                                   double rho_plus, double rho_minus, double eps,
                                                   Condition condition, int trials, std::uint64_t seed,
                                                   const LandscapeOptions& opt = {});

}  // namespace mhdi
