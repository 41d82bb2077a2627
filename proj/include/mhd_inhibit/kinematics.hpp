#pragma once

// Lagrangian flow maps zeta(y) = y + eta(y): deformation gradients, cofactor
// matrices, Jacobians, the frozen-in field B = d_M zeta, and surface fluxes.
//
// Conventions: F(i, j) = d_j zeta_i. The cofactor C = cof(F) is the matrix of
// signed complementary minors, so F^T C = J I and C = J F^{-T}. The matrix
// written script-A in the transport equations is C / J, hence J A^T = C^T.

#include "mhd_inhibit/model.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace mhdi {

enum class DerivativeMode { analytic, finite_difference };

/// Position, first and second derivatives of a map at one label.
struct MapSample {
    Vec3 zeta{};
    Mat3 F = Mat3::identity();
    Hessian3 H{};
};

/// A map evaluable at arbitrary labels.
class LagrangianMap {
public:
    virtual ~LagrangianMap() = default;
    /// order 0: position only; 1: adds F; 2: adds H.
    virtual MapSample sample(const Vec3& y, int order) const = 0;
    MapSample sample(const Vec3& y) const { return sample(y, 2); }
    virtual DerivativeMode mode() const { return DerivativeMode::analytic; }
};

class IdentityMap final : public LagrangianMap {
public:
    using LagrangianMap::sample;
    MapSample sample(const Vec3& y, int order) const override;
};

/// zeta = y + eta with eta given in closed form (gradient and Hessian required).
class DisplacementMap final : public LagrangianMap {
public:
    explicit DisplacementMap(FieldFunction eta);
    using LagrangianMap::sample;
    MapSample sample(const Vec3& y, int order) const override;

private:
    FieldFunction eta_;
};

/// Steady velocity field with derivatives, the generator of flow maps.
class VelocityField {
public:
    virtual ~VelocityField() = default;
    virtual Vec3 value(const Vec3& x) const = 0;
    virtual Mat3 gradient(const Vec3& x) const = 0;
    virtual Hessian3 hessian(const Vec3& x) const = 0;
    /// Value and derivatives up to the given order in one call.
    virtual void evaluate(const Vec3& x, int order, Vec3& v, Mat3& g, Hessian3& h) const {
        v = value(x);
        if (order >= 1) g = gradient(x);
        if (order >= 2) h = hessian(x);
    }
};

/// One trigonometric mode on the slab, phase theta = k1 y1 / L1 + k2 y2 / L2 + phase
/// and vertical variable s = (y3 - a) / (b - a).
///   poloidal: w_h = A psi'(y3) cos(theta) d,  w3 = A (d . kappa) psi sin(theta),  psi = sin^2(n pi s)
///   toroidal: w_h = A chi(y3) cos(theta) (-kappa2, kappa1),  w3 = 0,  chi = sin(n pi s)
/// Both are divergence-free and vanish on the walls; poloidal modes also have d3 w3 = 0 there.
struct TrigMode {
    enum class Kind { poloidal, toroidal };
    Kind kind = Kind::poloidal;
    int k1 = 0;
    int k2 = 0;
    int n = 1;
    double amplitude = 1.0;
    double phase = 0.0;
    Vec3 d{1.0, 0.0, 0.0};  // poloidal horizontal direction
};

/// Finite sum of TrigModes with exact derivatives.
class SolenoidalField final : public VelocityField {
public:
    SolenoidalField(SlabDomain domain, std::vector<TrigMode> modes);
    Vec3 value(const Vec3& x) const override;
    Mat3 gradient(const Vec3& x) const override;
    Hessian3 hessian(const Vec3& x) const override;
    void evaluate(const Vec3& x, int order, Vec3& v, Mat3& g, Hessian3& h) const override;

    const SlabDomain& domain() const { return domain_; }
    const std::vector<TrigMode>& modes() const { return modes_; }
    /// Closed-form function (value, gradient, Hessian) for grid sampling.
    FieldFunction as_function() const;
    /// Returns a copy with all amplitudes multiplied by s.
    SolenoidalField scaled(double s) const;

private:
    struct Eval {
        Vec3 v{};
        Mat3 g{};
        Hessian3 h{};
    };
    Eval eval(const Vec3& x, int order) const;

    SlabDomain domain_;
    std::vector<TrigMode> modes_;
};

/// Trilinear interpolation of a grid field (periodic horizontally, clamped
/// vertically). Derivatives come from interpolated finite differences.
class GridVelocity final : public VelocityField {
public:
    GridVelocity(const VectorField3& w, const Grid3D& grid);
    Vec3 value(const Vec3& x) const override;
    Mat3 gradient(const Vec3& x) const override;
    Hessian3 hessian(const Vec3&) const override { return {}; }

private:
    VectorField3 w_;
    std::vector<Mat3> grad_;
    Grid3D grid_;
};

/// Time-T flow of a steady velocity field by classical RK4. In analytic mode
/// the deformation gradient and Hessian are advanced with the variational
/// equations inside the same RK4 stages, so they are the exact derivatives of
/// the discrete map.
class FlowOfField final : public LagrangianMap {
public:
    FlowOfField(std::shared_ptr<const VelocityField> w, SlabDomain domain, double T, int steps,
                DerivativeMode mode = DerivativeMode::analytic);
    using LagrangianMap::sample;
    MapSample sample(const Vec3& y, int order) const override;
    DerivativeMode mode() const override { return mode_; }

private:
    std::shared_ptr<const VelocityField> w_;
    SlabDomain domain_;
    double T_;
    int steps_;
    DerivativeMode mode_;
};

/// Map on a grid: positions, displacement, derivatives and Jacobian per node.
struct FlowMap {
    Grid3D grid;
    VectorField3 zeta;
    VectorField3 eta;
    std::vector<Mat3> grad_zeta;
    std::vector<Mat3> cofactor;
    std::vector<Hessian3> hessian;  // empty in finite-difference mode
    ScalarField jacobian;
    DerivativeMode derivative_mode = DerivativeMode::analytic;
    std::shared_ptr<const LagrangianMap> source;  // continuous map, when known

    /// Continuous evaluation: the source map if present, else trilinear interpolation.
    MapSample sample(const Vec3& y, int order = 2) const;
    /// Stored derivatives at node n.
    MapSample node(std::size_t n) const;
};

/// From a displacement grid field. Analytic mode uses eta.gradient (and
/// eta.hessian when present); FD mode uses centered differences.
/// Throws SingularDeformation when J <= 1e-12 at some node.
FlowMap build_flow_map(const VectorField3& eta, const Grid3D& grid, DerivativeMode mode);
/// Samples a continuous map at the grid nodes.
FlowMap build_flow_map(std::shared_ptr<const LagrangianMap> map, const Grid3D& grid);

/// Flow of a boundary-vanishing solenoidal grid field by RK4 with trilinear
/// interpolation (finite-difference mode). Requires steps >= 16 and
/// max |div w| <= div_tol * max |grad w|.
FlowMap flow_from_divfree_field(const VectorField3& w, const Grid3D& grid, double T, int steps,
                                double div_tol = 1e-2);
/// Flow of a closed-form solenoidal field (analytic mode).
FlowMap flow_from_divfree_field(std::shared_ptr<const VelocityField> w, const Grid3D& grid, double T, int steps);

/// B = F M at every node.
VectorField3 cauchy_magnetic_field(const FlowMap& map, const PhysicalParams& params);
/// B = J0 F A0^T B0 / J at every node.
VectorField3 cauchy_magnetic_field_general(const FlowMap& map, const VectorField3& B0, const ScalarField& J0,
                                           const std::vector<Mat3>& A0);

/// max |F^T C - J I| over nodes.
double kronecker_residual(const FlowMap& map);
/// max over nodes and rows i of |sum_k d_k C_ik|. Uses the carried Hessian
/// when present, finite differences of the cofactor grid otherwise.
double piola_residual(const FlowMap& map);
/// max |C^T B - M| over nodes.
double frozen_in_residual(const FlowMap& map, const VectorField3& B, const Vec3& M_bar);
/// Row divergence of cof(F) at one sample, from F and H by the product rule.
Vec3 cofactor_divergence(const MapSample& s);

// ---------------------------------------------------------------------------
// Surfaces and flux
// ---------------------------------------------------------------------------

/// Parameterized surface over the rectangle [a0, a1] x [b0, b1].
struct ParamSurface {
    std::function<Vec3(double, double)> f;
    std::function<Vec3(double, double)> t_alpha;  // d f / d alpha
    std::function<Vec3(double, double)> t_beta;   // d f / d beta
    double a0 = 0.0, a1 = 1.0, b0 = 0.0, b1 = 1.0;
    int quad = 32;
};

/// Flat square of the given side centred at c, normal to axis (0, 1, 2);
/// oriented so that t_alpha x t_beta = +e_axis.
ParamSurface axis_patch(const Vec3& c, int axis, double side);
/// Same surface with the parameter roles exchanged (opposite orientation).
ParamSurface reversed(const ParamSurface& s);

/// Tensor Gauss-Legendre flux of M through the surface. Without a map the
/// field is evaluated at f(alpha, beta); with a map the surface is zeta o f,
/// its tangents are F t, and M is called with the label y = f(alpha, beta)
/// (Lagrangian description of the transported field).
/// Throws DegenerateSurface when |t_a x t_b| <= 1e-14 |t_a| |t_b| at a node.
double flux_through_surface(const std::function<Vec3(const Vec3&)>& M, const ParamSurface& surface,
                            const LagrangianMap* map = nullptr);

struct FluxSurfaceReport {
    double initial = 0.0;      // flux of M through S0
    double transported = 0.0;  // flux of B through zeta(S0)
    double difference = 0.0;
    double converse = 0.0;     // max_i |flux through small e_i patch / area - M_i| at the surface centre
};

struct FluxReport {
    std::vector<FluxSurfaceReport> surfaces;
    double pointwise_residual = 0.0;  // max |C^T B - M| over grid nodes
    double max_difference = 0.0;
    double max_converse = 0.0;
};

/// Field in Lagrangian form: B as a function of the label and the map sample there.
using LagrangianField = std::function<Vec3(const Vec3& y, const MapSample& s)>;

/// Both directions of the flux equivalence: pointwise C^T B = M implies equal
/// fluxes; equal fluxes over shrinking axis patches recover C^T B = M.
/// B defaults to F M.
FluxReport verify_flux_equivalence(const FlowMap& map, const PhysicalParams& params,
                                   const std::vector<ParamSurface>& surfaces, const LagrangianField& B = {},
                                   double patch_side = 1e-3);

}  // namespace mhdi
