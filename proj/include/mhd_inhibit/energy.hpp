#pragma once

// Energy functionals of a displacement eta on the slab:
//   V_M      = lambda ||d_M eta||^2
//   V_grho   = g int rho' eta3^2
//   V_star   = g int [R(y3 + eta3) - R(y3) - rho(y3) eta3],  R' = rho
//   N_grho   = V_star - V_grho / 2
//            = (g/2) int int_0^{eta3} (eta3 - z)^2 rho''(y3 + z) dz
//   delta_EP = V_M / 2 - V_star

#include "mhd_inhibit/kinematics.hpp"

namespace mhdi {

struct MagneticVariation {
    double delta_M = 0.0;     // cross_term + V_M / 2
    double cross_term = 0.0;  // lambda int d_M eta . M
    double V_M = 0.0;
};

MagneticVariation magnetic_energy_variation(const VectorField3& eta, const PhysicalParams& params,
                                            const Grid3D& grid);

struct PotentialVariation {
    double V_star = 0.0;
    double delta_direct = 0.0;  // g int rho eta3
    double max_jacobian_defect = 0.0;
    bool volume_preserving = true;  // max |J - 1| within the tolerance
};

/// Requires a closed-form density profile (for the antiderivative R).
PotentialVariation potential_variation_exact(const FlowMap& map, const Profile1D& density,
                                             const PhysicalParams& params, double jacobian_tol = 1e-6);

/// N_grho by the nested Gauss-Legendre form (no cancellation for small eta3).
double cubic_remainder(const VectorField3& eta, const Profile1D& density, const PhysicalParams& params,
                       const Grid3D& grid);

struct CubicRemainderReport {
    double N = 0.0;
    double bound = 0.0;  // c ||eta3||_inf ||eta3||_0^2
    double c = 0.0;      // g max|rho''| / 2
    double eta3_sup = 0.0;
    double eta3_l2sq = 0.0;
    bool holds = false;
};

CubicRemainderReport cubic_remainder_bound_check(const VectorField3& eta, const Profile1D& density,
                                                 const PhysicalParams& params, const Grid3D& grid);

struct EnergyReport {
    double V_M = 0.0;
    double delta_M = 0.0;
    double V_grho = 0.0;
    double N_grho = 0.0;
    double V_star = 0.0;
    double delta_grho_direct = 0.0;
    double delta_EP = 0.0;
    double cross_term = 0.0;
};

/// All functionals for one displacement. V_star here is V_grho / 2 + N_grho.
EnergyReport energy_report(const VectorField3& eta, const Profile1D& density, const PhysicalParams& params,
                           const Grid3D& grid);

struct StratifiedFunctionals {
    double V_jump = 0.0;  // g [rho] int_Sigma eta3^2
    double N_jump = 0.0;
    double grad_h_sup = 0.0;  // max Frobenius norm of grad_h eta_h on Sigma
    double bound = 0.0;       // grad_h_sup (1 + grad_h_sup) |V_jump|
    bool holds = false;
};

/// Surface functionals on the interface node layer (grid.interface_index() must exist).
StratifiedFunctionals stratified_surface_functionals(const VectorField3& eta, const Grid3D& grid,
                                                     double rho_plus, double rho_minus,
                                                     const PhysicalParams& params);

struct PoincareCheck {
    double lhs = 0.0;  // ||w||^2
    double rhs = 0.0;  // (h^2 / (lambda pi^2)) lambda ||d_n w||^2
    bool holds = false;
};

/// direction must have third component 1.
PoincareCheck poincare_check(const VectorField3& w, const Vec3& direction, const PhysicalParams& params,
                             const Grid3D& grid);

}  // namespace mhdi
