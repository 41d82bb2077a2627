#include "mhd_inhibit/energy.hpp"

#include "mhd_inhibit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mhdi {

namespace {

double second_derivative(const Profile1D& p, double y) {
    if (p.shape) return p.shape->d2(y);
    const int n = p.n();
    const double h = p.spacing();
    double t = std::clamp((y - p.a) / h, 0.0, static_cast<double>(n - 1));
    int k = std::clamp(static_cast<int>(std::lround(t)), 1, n - 2);
    return (p.derivative[k + 1] - p.derivative[k - 1]) / (2.0 * h);
}

}  // namespace

MagneticVariation magnetic_energy_variation(const VectorField3& eta, const PhysicalParams& params,
                                            const Grid3D& grid) {
    params.validate();
    const std::vector<Mat3> g = gradient_of(eta, grid);
    const Vec3& M = params.M_bar;
    MagneticVariation r;
    r.V_M = params.lambda * integrate_nodes(grid, [&](std::size_t n, int) {
        const Vec3 d = g[n] * M;
        return dot(d, d);
    });
    r.cross_term = params.lambda * integrate_nodes(grid, [&](std::size_t n, int) { return dot(g[n] * M, M); });
    r.delta_M = r.cross_term + 0.5 * r.V_M;
    return r;
}

PotentialVariation potential_variation_exact(const FlowMap& map, const Profile1D& density,
                                             const PhysicalParams& params, double jacobian_tol) {
    params.validate();
    if (!density.shape)
        throw InvalidArgument("potential_variation_exact: needs a closed-form density profile (antiderivative)");
    const ProfileShape& s = *density.shape;
    const Grid3D& grid = map.grid;
    PotentialVariation r;
    for (double J : map.jacobian.values) r.max_jacobian_defect = std::max(r.max_jacobian_defect, std::fabs(J - 1.0));
    r.volume_preserving = r.max_jacobian_defect <= jacobian_tol;
    r.V_star = params.g * integrate_nodes(grid, [&](std::size_t n, int k) {
        const double y3 = grid.y3(k);
        const double e3 = map.eta.comp[2][n];
        return s.antiderivative(y3 + e3) - s.antiderivative(y3) - s.value(y3) * e3;
    });
    r.delta_direct = params.g * integrate_nodes(grid, [&](std::size_t n, int k) {
        return s.value(grid.y3(k)) * map.eta.comp[2][n];
    });
    return r;
}

double cubic_remainder(const VectorField3& eta, const Profile1D& density, const PhysicalParams& params,
                       const Grid3D& grid) {
    static const GaussRule rule = gauss_legendre(12);
    return 0.5 * params.g * integrate_nodes(grid, [&](std::size_t n, int k) {
        const double e = eta.comp[2][n];
        if (e == 0.0) return 0.0;
        const double y3 = grid.y3(k);
        // int_0^e (e - z)^2 rho''(y3 + z) dz = e^3 int_0^1 (1 - t)^2 rho''(y3 + e t) dt
        const double I = integrate_gl(rule, 0.0, 1.0, [&](double t) {
            return (1.0 - t) * (1.0 - t) * second_derivative(density, y3 + e * t);
        });
        return e * e * e * I;
    });
}

CubicRemainderReport cubic_remainder_bound_check(const VectorField3& eta, const Profile1D& density,
                                                 const PhysicalParams& params, const Grid3D& grid) {
    params.validate();
    CubicRemainderReport r;
    r.N = cubic_remainder(eta, density, params, grid);
    r.eta3_sup = sup_norm(eta.comp[2]);
    r.eta3_l2sq = integrate_nodes(grid, [&](std::size_t n, int) { return eta.comp[2][n] * eta.comp[2][n]; });
    const double lo = grid.domain.a - r.eta3_sup, hi = grid.domain.b + r.eta3_sup;
    double d2max = 0.0;
    const int samples = 4001;
    for (int q = 0; q < samples; ++q)
        d2max = std::max(d2max, std::fabs(second_derivative(density, lo + (hi - lo) * q / (samples - 1))));
    r.c = 0.5 * params.g * d2max;
    r.bound = r.c * r.eta3_sup * r.eta3_l2sq;
    r.holds = std::fabs(r.N) <= r.bound * (1.0 + 1e-12) + 1e-300;
    return r;
}

EnergyReport energy_report(const VectorField3& eta, const Profile1D& density, const PhysicalParams& params,
                           const Grid3D& grid) {
    const MagneticVariation mv = magnetic_energy_variation(eta, params, grid);
    EnergyReport r;
    r.V_M = mv.V_M;
    r.delta_M = mv.delta_M;
    r.cross_term = mv.cross_term;
    r.V_grho = params.g * integrate_nodes(grid, [&](std::size_t n, int k) {
        const double e = eta.comp[2][n];
        return density.derivative_at(grid.y3(k)) * e * e;
    });
    r.N_grho = cubic_remainder(eta, density, params, grid);
    r.V_star = 0.5 * r.V_grho + r.N_grho;
    r.delta_grho_direct = params.g * integrate_nodes(grid, [&](std::size_t n, int k) {
        return density.value_at(grid.y3(k)) * eta.comp[2][n];
    });
    r.delta_EP = 0.5 * r.V_M - r.V_star;
    return r;
}

StratifiedFunctionals stratified_surface_functionals(const VectorField3& eta, const Grid3D& grid,
                                                     double rho_plus, double rho_minus,
                                                     const PhysicalParams& params) {
    params.validate();
    const auto k0 = grid.interface_index();
    if (!k0) throw InvalidArgument("stratified_surface_functionals: the interface is not a grid node layer");
    const std::vector<Mat3> g = gradient_of(eta, grid);
    const double jump = rho_plus - rho_minus;
    double v = 0.0, nn = 0.0;
    StratifiedFunctionals r;
    for (int j = 0; j < grid.n2; ++j)
        for (int i = 0; i < grid.n1; ++i) {
            const std::size_t n = grid.index(i, j, *k0);
            const Mat3& G = g[n];
            const double e3 = eta.comp[2][n];
            const double a = G(0, 0), b = G(1, 1), c = G(0, 1), d = G(1, 0);
            v += e3 * e3;
            nn += e3 * e3 * (a * b + a + b - c * d);
            r.grad_h_sup = std::max(r.grad_h_sup, std::sqrt(a * a + b * b + c * c + d * d));
        }
    const double area = grid.h1 * grid.h2;
    r.V_jump = params.g * jump * v * area;
    r.N_jump = 0.5 * params.g * jump * nn * area;
    r.bound = r.grad_h_sup * (1.0 + r.grad_h_sup) * std::fabs(r.V_jump);
    r.holds = std::fabs(r.N_jump) <= r.bound * (1.0 + 1e-12) + 1e-300;
    return r;
}

PoincareCheck poincare_check(const VectorField3& w, const Vec3& direction, const PhysicalParams& params,
                             const Grid3D& grid) {
    params.validate();
    if (direction[2] != 1.0) throw InvalidArgument("poincare_check: direction must have third component 1");
    const std::vector<Mat3> g = gradient_of(w, grid);
    const double h = grid.domain.height();
    PoincareCheck r;
    r.lhs = l2_norm_sq(w, grid);
    const double dn = integrate_nodes(grid, [&](std::size_t n, int) {
        const Vec3 d = g[n] * direction;
        return dot(d, d);
    });
    r.rhs = h * h / (params.lambda * std::numbers::pi * std::numbers::pi) * params.lambda * dn;
    r.holds = r.lhs <= r.rhs * (1.0 + 1e-12) + 1e-300;
    return r;
}

}  // namespace mhdi
