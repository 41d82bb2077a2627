#include "mhd_inhibit/kinematics.hpp"

#include "mhd_inhibit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mhdi {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

MapSample IdentityMap::sample(const Vec3& y, int) const {
    MapSample s;
    s.zeta = y;
    return s;
}

DisplacementMap::DisplacementMap(FieldFunction eta) : eta_(std::move(eta)) {
    if (!eta_.value || !eta_.gradient || !eta_.hessian)
        throw InvalidArgument("DisplacementMap: value, gradient and Hessian are all required");
}

MapSample DisplacementMap::sample(const Vec3& y, int order) const {
    MapSample s;
    s.zeta = y + eta_.value(y);
    if (order >= 1) s.F = Mat3::identity() + eta_.gradient(y);
    if (order >= 2) s.H = eta_.hessian(y);
    return s;
}

// ---------------------------------------------------------------------------
// SolenoidalField
// ---------------------------------------------------------------------------

SolenoidalField::SolenoidalField(SlabDomain domain, std::vector<TrigMode> modes)
    : domain_(std::move(domain)), modes_(std::move(modes)) {
    domain_.validate();
    for (const TrigMode& m : modes_)
        if (m.n < 1) throw InvalidArgument("SolenoidalField: vertical index must be >= 1");
}

namespace {

// Adds c f(y3) g(theta) to component i, with g = cos (is_cos) or sin.
// f holds f, f', f'' in y3; kappa is the horizontal wave vector.
void add_term(Vec3& v, Mat3& G, Hessian3& Hs, int order, int i, double c, const double f[3], bool is_cos,
              double theta, double k1, double k2) {
    const double cs = std::cos(theta), sn = std::sin(theta);
    const double g0 = is_cos ? cs : sn;
    const double g1 = is_cos ? -sn : cs;
    const double g2 = -g0;
    v[i] += c * f[0] * g0;
    if (order < 1) return;
    G(i, 0) += c * f[0] * g1 * k1;
    G(i, 1) += c * f[0] * g1 * k2;
    G(i, 2) += c * f[1] * g0;
    if (order < 2) return;
    Mat3& H = Hs[i];
    const double k[2] = {k1, k2};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) H(a, b) += c * f[0] * g2 * k[a] * k[b];
        H(a, 2) += c * f[1] * g1 * k[a];
        H(2, a) += c * f[1] * g1 * k[a];
    }
    H(2, 2) += c * f[2] * g0;
}

}  // namespace

SolenoidalField::Eval SolenoidalField::eval(const Vec3& x, int order) const {
    Eval e;
    const double H = domain_.height();
    const double z = x[2] - domain_.a;
    for (const TrigMode& m : modes_) {
        const double k1 = m.k1 / domain_.L1;
        const double k2 = m.k2 / domain_.L2;
        const double theta = k1 * x[0] + k2 * x[1] + m.phase;
        const double A = m.amplitude;
        if (m.kind == TrigMode::Kind::poloidal) {
            // psi = (1 - cos(q z)) / 2 with q = 2 n pi / H
            const double q = 2.0 * m.n * kPi / H;
            const double cq = std::cos(q * z), sq = std::sin(q * z);
            const double psi[3] = {0.5 * (1.0 - cq), 0.5 * q * sq, 0.5 * q * q * cq};
            const double dpsi[3] = {psi[1], psi[2], -0.5 * q * q * q * sq};
            const double dk = m.d[0] * k1 + m.d[1] * k2;
            for (int i = 0; i < 2; ++i)
                if (m.d[i] != 0.0) add_term(e.v, e.g, e.h, order, i, A * m.d[i], dpsi, true, theta, k1, k2);
            if (dk != 0.0) add_term(e.v, e.g, e.h, order, 2, A * dk, psi, false, theta, k1, k2);
        } else {
            const double p = m.n * kPi / H;
            const double cp = std::cos(p * z), sp = std::sin(p * z);
            const double chi[3] = {sp, p * cp, -p * p * sp};
            add_term(e.v, e.g, e.h, order, 0, -A * k2, chi, true, theta, k1, k2);
            add_term(e.v, e.g, e.h, order, 1, A * k1, chi, true, theta, k1, k2);
        }
    }
    return e;
}

Vec3 SolenoidalField::value(const Vec3& x) const { return eval(x, 0).v; }
Mat3 SolenoidalField::gradient(const Vec3& x) const { return eval(x, 1).g; }
Hessian3 SolenoidalField::hessian(const Vec3& x) const { return eval(x, 2).h; }

void SolenoidalField::evaluate(const Vec3& x, int order, Vec3& v, Mat3& g, Hessian3& h) const {
    Eval e = eval(x, order);
    v = e.v;
    g = e.g;
    h = e.h;
}

FieldFunction SolenoidalField::as_function() const {
    auto self = std::make_shared<SolenoidalField>(*this);
    return {[self](const Vec3& y) { return self->value(y); }, [self](const Vec3& y) { return self->gradient(y); },
            [self](const Vec3& y) { return self->hessian(y); }};
}

SolenoidalField SolenoidalField::scaled(double s) const {
    SolenoidalField r = *this;
    for (TrigMode& m : r.modes_) m.amplitude *= s;
    return r;
}

// ---------------------------------------------------------------------------
// Trilinear interpolation
// ---------------------------------------------------------------------------

namespace {

struct Stencil {
    int i0, j0, k0;
    double fx, fy, fz;
};

Stencil locate(const Grid3D& g, const Vec3& x) {
    const double tx = (x[0] + kPi * g.domain.L1) / g.h1;
    const double ty = (x[1] + kPi * g.domain.L2) / g.h2;
    double tz = (x[2] - g.domain.a) / g.h3;
    tz = std::clamp(tz, 0.0, static_cast<double>(g.n3 - 1));
    Stencil s;
    const double ix = std::floor(tx), iy = std::floor(ty);
    s.i0 = static_cast<int>(std::fmod(ix, g.n1));
    s.j0 = static_cast<int>(std::fmod(iy, g.n2));
    s.fx = tx - ix;
    s.fy = ty - iy;
    s.k0 = std::min(static_cast<int>(tz), g.n3 - 2);
    s.fz = tz - s.k0;
    return s;
}

template <class Get>
auto trilinear(const Grid3D& g, const Stencil& s, Get get) {
    auto w = [&](int di, int dj, int dk) {
        return (di ? s.fx : 1.0 - s.fx) * (dj ? s.fy : 1.0 - s.fy) * (dk ? s.fz : 1.0 - s.fz);
    };
    auto acc = w(0, 0, 0) * get(g.index(s.i0, s.j0, s.k0));
    for (int c = 1; c < 8; ++c) {
        const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
        acc = acc + w(di, dj, dk) * get(g.index(s.i0 + di, s.j0 + dj, s.k0 + dk));
    }
    return acc;
}

}  // namespace

GridVelocity::GridVelocity(const VectorField3& w, const Grid3D& grid)
    : w_(w), grad_(gradient_of(w, grid)), grid_(grid) {}

Vec3 GridVelocity::value(const Vec3& x) const {
    return trilinear(grid_, locate(grid_, x), [&](std::size_t n) { return w_.at(n); });
}

Mat3 GridVelocity::gradient(const Vec3& x) const {
    return trilinear(grid_, locate(grid_, x), [&](std::size_t n) { return grad_[n]; });
}

// ---------------------------------------------------------------------------
// FlowOfField
// ---------------------------------------------------------------------------

FlowOfField::FlowOfField(std::shared_ptr<const VelocityField> w, SlabDomain domain, double T, int steps,
                         DerivativeMode mode)
    : w_(std::move(w)), domain_(std::move(domain)), T_(T), steps_(steps), mode_(mode) {
    if (!w_) throw InvalidArgument("FlowOfField: null velocity field");
    if (steps_ < 16) throw InvalidArgument("flow_from_divfree_field: steps must be >= 16");
    if (!std::isfinite(T_)) throw InvalidArgument("flow_from_divfree_field: T must be finite");
    domain_.validate();
}

namespace {

struct FlowState {
    Vec3 x{};
    Mat3 F{};
    Hessian3 H{};
};

FlowState flow_rhs(const VelocityField& w, const FlowState& s, int order) {
    FlowState d;
    Mat3 G;
    Hessian3 Hw;
    w.evaluate(s.x, order, d.x, G, Hw);
    if (order < 1) return d;
    d.F = G * s.F;
    if (order < 2) return d;
    for (int i = 0; i < 3; ++i) {
        Mat3 FtHF = transpose(s.F) * Hw[i] * s.F;
        Mat3 r = FtHF;
        for (int p = 0; p < 3; ++p) r = r + G(i, p) * s.H[p];
        d.H[i] = r;
    }
    return d;
}

FlowState axpy(const FlowState& s, double a, const FlowState& d, int order) {
    FlowState r;
    r.x = s.x + a * d.x;
    if (order >= 1) r.F = s.F + a * d.F;
    if (order >= 2)
        for (int i = 0; i < 3; ++i) r.H[i] = s.H[i] + a * d.H[i];
    return r;
}

}  // namespace

MapSample FlowOfField::sample(const Vec3& y, int order) const {
    if (mode_ == DerivativeMode::finite_difference) order = std::min(order, 1);
    const double dt = T_ / steps_;
    const double tol = 1e-9 * domain_.height();
    FlowState s;
    s.x = y;
    s.F = Mat3::identity();
    for (int n = 0; n < steps_; ++n) {
        const FlowState k1 = flow_rhs(*w_, s, order);
        const FlowState k2 = flow_rhs(*w_, axpy(s, 0.5 * dt, k1, order), order);
        const FlowState k3 = flow_rhs(*w_, axpy(s, 0.5 * dt, k2, order), order);
        const FlowState k4 = flow_rhs(*w_, axpy(s, dt, k3, order), order);
        s.x = s.x + (dt / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        if (order >= 1) s.F = s.F + (dt / 6.0) * (k1.F + 2.0 * k2.F + 2.0 * k3.F + k4.F);
        if (order >= 2)
            for (int i = 0; i < 3; ++i)
                s.H[i] = s.H[i] + (dt / 6.0) * (k1.H[i] + 2.0 * k2.H[i] + 2.0 * k3.H[i] + k4.H[i]);
        if (s.x[2] < domain_.a - tol || s.x[2] > domain_.b + tol || !std::isfinite(s.x[2]))
            throw TrajectoryExit("flow_from_divfree_field: trajectory from y3 = " + std::to_string(y[2]) +
                                 " left the slab at step " + std::to_string(n + 1));
    }
    MapSample out;
    out.zeta = s.x;
    if (order >= 1) out.F = s.F;
    if (order >= 2) out.H = s.H;
    return out;
}

// ---------------------------------------------------------------------------
// FlowMap
// ---------------------------------------------------------------------------

MapSample FlowMap::node(std::size_t n) const {
    MapSample s;
    s.zeta = zeta.at(n);
    s.F = grad_zeta[n];
    if (!hessian.empty()) s.H = hessian[n];
    return s;
}

MapSample FlowMap::sample(const Vec3& y, int order) const {
    if (source) return source->sample(y, order);
    const Stencil st = locate(grid, y);
    MapSample s;
    s.zeta = y + trilinear(grid, st, [&](std::size_t n) { return eta.at(n); });
    if (order >= 1) s.F = trilinear(grid, st, [&](std::size_t n) { return grad_zeta[n]; });
    return s;
}

namespace {

void finish_flow_map(FlowMap& m) {
    const std::size_t N = m.grid.size();
    m.cofactor.resize(N);
    m.jacobian = ScalarField(N);
    for (int k = 0; k < m.grid.n3; ++k)
        for (int j = 0; j < m.grid.n2; ++j)
            for (int i = 0; i < m.grid.n1; ++i) {
                const std::size_t n = m.grid.index(i, j, k);
                const double J = det(m.grad_zeta[n]);
                if (!(J > 1e-12))
                    throw SingularDeformation("build_flow_map: det(grad zeta) = " + std::to_string(J) +
                                              " at node (" + std::to_string(i) + ", " + std::to_string(j) + ", " +
                                              std::to_string(k) + ")");
                m.jacobian[n] = J;
                m.cofactor[n] = cofactor(m.grad_zeta[n]);
            }
}

}  // namespace

FlowMap build_flow_map(const VectorField3& eta, const Grid3D& grid, DerivativeMode mode) {
    if (eta.size() != grid.size()) throw InvalidArgument("build_flow_map: field does not match grid");
    if (eta.boundary == BoundaryKind::none)
        throw InvalidArgument("build_flow_map: eta must be boundary-vanishing or periodic in y3");
    if (eta.boundary == BoundaryKind::vanishing) {
        const double tol = 1e-12 * std::max(1.0, sup_norm(eta));
        if (boundary_sup_norm(eta, grid) > tol)
            throw InvalidArgument("build_flow_map: eta does not vanish on the walls");
    }
    if (mode == DerivativeMode::analytic && !eta.has_gradient())
        throw InvalidArgument("build_flow_map: analytic mode needs the gradient of eta");

    FlowMap m;
    m.grid = grid;
    m.eta = eta;
    m.derivative_mode = mode;
    m.zeta = VectorField3(grid.size());
    m.zeta.boundary = BoundaryKind::none;
    for (int k = 0; k < grid.n3; ++k)
        for (int j = 0; j < grid.n2; ++j)
            for (int i = 0; i < grid.n1; ++i) {
                const std::size_t n = grid.index(i, j, k);
                m.zeta.set(n, grid.position(i, j, k) + eta.at(n));
            }
    const std::vector<Mat3> grad = mode == DerivativeMode::analytic ? eta.gradient : fd_gradient(eta, grid);
    m.grad_zeta.resize(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) m.grad_zeta[n] = Mat3::identity() + grad[n];
    if (mode == DerivativeMode::analytic && eta.has_hessian()) m.hessian = eta.hessian;
    finish_flow_map(m);
    return m;
}

FlowMap build_flow_map(std::shared_ptr<const LagrangianMap> map, const Grid3D& grid) {
    if (!map) throw InvalidArgument("build_flow_map: null map");
    FlowMap m;
    m.grid = grid;
    m.derivative_mode = map->mode();
    m.source = map;
    const std::size_t N = grid.size();
    m.zeta = VectorField3(N);
    m.eta = VectorField3(N);
    m.eta.boundary = BoundaryKind::vanishing;
    m.grad_zeta.resize(N);
    const bool analytic = map->mode() == DerivativeMode::analytic;
    if (analytic) m.hessian.resize(N);
    for (int k = 0; k < grid.n3; ++k)
        for (int j = 0; j < grid.n2; ++j)
            for (int i = 0; i < grid.n1; ++i) {
                const std::size_t n = grid.index(i, j, k);
                const Vec3 y = grid.position(i, j, k);
                const MapSample s = map->sample(y, analytic ? 2 : 0);
                m.zeta.set(n, s.zeta);
                m.eta.set(n, s.zeta - y);
                if (analytic) {
                    m.grad_zeta[n] = s.F;
                    m.hessian[n] = s.H;
                }
            }
    if (!analytic) {
        const std::vector<Mat3> g = fd_gradient(m.eta, grid);
        for (std::size_t n = 0; n < N; ++n) m.grad_zeta[n] = Mat3::identity() + g[n];
    }
    finish_flow_map(m);
    return m;
}

FlowMap flow_from_divfree_field(const VectorField3& w, const Grid3D& grid, double T, int steps, double div_tol) {
    if (w.size() != grid.size()) throw InvalidArgument("flow_from_divfree_field: field does not match grid");
    if (steps < 16) throw InvalidArgument("flow_from_divfree_field: steps must be >= 16");
    const std::vector<Mat3> g = gradient_of(w, grid);
    double div_max = 0.0, scale = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        div_max = std::max(div_max, std::fabs(g[n](0, 0) + g[n](1, 1) + g[n](2, 2)));
        scale = std::max(scale, max_abs(g[n]));
    }
    if (div_max > div_tol * scale)
        throw InvalidArgument("flow_from_divfree_field: max |div w| = " + std::to_string(div_max) +
                              " exceeds tolerance");
    auto vel = std::make_shared<GridVelocity>(w, grid);
    auto flow = std::make_shared<FlowOfField>(vel, grid.domain, T, steps, DerivativeMode::finite_difference);
    return build_flow_map(flow, grid);
}

FlowMap flow_from_divfree_field(std::shared_ptr<const VelocityField> w, const Grid3D& grid, double T, int steps) {
    auto flow = std::make_shared<FlowOfField>(std::move(w), grid.domain, T, steps, DerivativeMode::analytic);
    return build_flow_map(flow, grid);
}

// ---------------------------------------------------------------------------
// Frozen-in field and identities
// ---------------------------------------------------------------------------

VectorField3 cauchy_magnetic_field(const FlowMap& map, const PhysicalParams& params) {
    VectorField3 B(map.grid.size());
    for (std::size_t n = 0; n < B.size(); ++n) B.set(n, map.grad_zeta[n] * params.M_bar);
    return B;
}

VectorField3 cauchy_magnetic_field_general(const FlowMap& map, const VectorField3& B0, const ScalarField& J0,
                                           const std::vector<Mat3>& A0) {
    const std::size_t N = map.grid.size();
    if (B0.size() != N || J0.size() != N || A0.size() != N)
        throw InvalidArgument("cauchy_magnetic_field_general: inputs do not match the grid");
    VectorField3 B(N);
    for (std::size_t n = 0; n < N; ++n) {
        const double J = map.jacobian[n];
        if (!(J > 0.0)) throw SingularDeformation("cauchy_magnetic_field_general: nonpositive Jacobian");
        B.set(n, (J0[n] / J) * (map.grad_zeta[n] * (transpose(A0[n]) * B0.at(n))));
    }
    return B;
}

double kronecker_residual(const FlowMap& map) {
    double r = 0.0;
    for (std::size_t n = 0; n < map.grid.size(); ++n) {
        const Mat3 P = transpose(map.grad_zeta[n]) * map.cofactor[n];
        r = std::max(r, max_abs(P - map.jacobian[n] * Mat3::identity()));
    }
    return r;
}

Vec3 cofactor_divergence(const MapSample& s) {
    // cof is quadratic in F, so the central difference along E_k is its exact derivative.
    Vec3 div{};
    for (int k = 0; k < 3; ++k) {
        Mat3 E;
        for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) E(p, q) = s.H[p](q, k);
        const Mat3 dC = 0.5 * (cofactor(s.F + E) - cofactor(s.F - E));
        for (int i = 0; i < 3; ++i) div[i] += dC(i, k);
    }
    return div;
}

double piola_residual(const FlowMap& map) {
    double r = 0.0;
    if (!map.hessian.empty()) {
        for (std::size_t n = 0; n < map.grid.size(); ++n) r = std::max(r, max_abs(cofactor_divergence(map.node(n))));
        return r;
    }
    for (int i = 0; i < 3; ++i) {
        VectorField3 row(map.grid.size());
        for (std::size_t n = 0; n < row.size(); ++n)
            row.set(n, {map.cofactor[n](i, 0), map.cofactor[n](i, 1), map.cofactor[n](i, 2)});
        r = std::max(r, sup_norm(divergence(row, map.grid)));
    }
    return r;
}

double frozen_in_residual(const FlowMap& map, const VectorField3& B, const Vec3& M_bar) {
    double r = 0.0;
    for (std::size_t n = 0; n < map.grid.size(); ++n)
        r = std::max(r, max_abs(transpose(map.cofactor[n]) * B.at(n) - M_bar));
    return r;
}

// ---------------------------------------------------------------------------
// Surfaces and flux
// ---------------------------------------------------------------------------

ParamSurface axis_patch(const Vec3& c, int axis, double side) {
    if (axis < 0 || axis > 2) throw InvalidArgument("axis_patch: axis must be 0, 1 or 2");
    if (!(side > 0.0)) throw InvalidArgument("axis_patch: side must be positive");
    const int p = (axis + 1) % 3, q = (axis + 2) % 3;  // e_p x e_q = e_axis
    Vec3 ep{}, eq{};
    ep[p] = 1.0;
    eq[q] = 1.0;
    ParamSurface s;
    s.f = [c, ep, eq](double a, double b) { return c + a * ep + b * eq; };
    s.t_alpha = [ep](double, double) { return ep; };
    s.t_beta = [eq](double, double) { return eq; };
    s.a0 = s.b0 = -0.5 * side;
    s.a1 = s.b1 = 0.5 * side;
    return s;
}

ParamSurface reversed(const ParamSurface& s) {
    ParamSurface r;
    r.f = [f = s.f](double a, double b) { return f(b, a); };
    r.t_alpha = [t = s.t_beta](double a, double b) { return t(b, a); };
    r.t_beta = [t = s.t_alpha](double a, double b) { return t(b, a); };
    r.a0 = s.b0;
    r.a1 = s.b1;
    r.b0 = s.a0;
    r.b1 = s.a1;
    r.quad = s.quad;
    return r;
}

namespace {

using SampledField = std::function<Vec3(const Vec3& y, const MapSample& s)>;

double flux_core(const SampledField& M, const ParamSurface& S, const LagrangianMap* map) {
    if (!S.f || !S.t_alpha || !S.t_beta) throw InvalidArgument("flux_through_surface: incomplete surface");
    const GaussRule rule = gauss_legendre(S.quad);
    const double ha = 0.5 * (S.a1 - S.a0), ma = 0.5 * (S.a1 + S.a0);
    const double hb = 0.5 * (S.b1 - S.b0), mb = 0.5 * (S.b1 + S.b0);
    double total = 0.0;
    for (int p = 0; p < S.quad; ++p) {
        const double al = ma + ha * rule.nodes[p];
        double row = 0.0;
        for (int q = 0; q < S.quad; ++q) {
            const double be = mb + hb * rule.nodes[q];
            const Vec3 y = S.f(al, be);
            Vec3 ta = S.t_alpha(al, be), tb = S.t_beta(al, be);
            MapSample s;
            s.zeta = y;
            if (map) {
                s = map->sample(y, 1);
                ta = s.F * ta;
                tb = s.F * tb;
            }
            const Vec3 nrm = cross(ta, tb);
            if (!(norm(nrm) > 1e-14 * norm(ta) * norm(tb)))
                throw DegenerateSurface("flux_through_surface: tangents lose rank at (" + std::to_string(al) +
                                        ", " + std::to_string(be) + ")");
            row += rule.weights[q] * dot(M(y, s), nrm);
        }
        total += rule.weights[p] * row;
    }
    return total * ha * hb;
}

}  // namespace

double flux_through_surface(const std::function<Vec3(const Vec3&)>& M, const ParamSurface& surface,
                            const LagrangianMap* map) {
    return flux_core([&](const Vec3& y, const MapSample&) { return M(y); }, surface, map);
}

namespace {

class FlowMapView final : public LagrangianMap {
public:
    explicit FlowMapView(const FlowMap& m) : m_(m) {}
    MapSample sample(const Vec3& y, int order) const override { return m_.sample(y, order); }

private:
    const FlowMap& m_;
};

}  // namespace

FluxReport verify_flux_equivalence(const FlowMap& map, const PhysicalParams& params,
                                   const std::vector<ParamSurface>& surfaces, const LagrangianField& B_in,
                                   double patch_side) {
    const Vec3 M = params.M_bar;
    const LagrangianField B = B_in ? B_in : LagrangianField([M](const Vec3&, const MapSample& s) { return s.F * M; });
    const FlowMapView view(map);
    const LagrangianMap* lm = map.source ? map.source.get() : &view;

    FluxReport rep;
    for (int k = 0; k < map.grid.n3; ++k)
        for (int j = 0; j < map.grid.n2; ++j)
            for (int i = 0; i < map.grid.n1; ++i) {
                const std::size_t n = map.grid.index(i, j, k);
                const Vec3 b = B(map.grid.position(i, j, k), map.node(n));
                rep.pointwise_residual = std::max(rep.pointwise_residual, max_abs(transpose(map.cofactor[n]) * b - M));
            }

    for (const ParamSurface& S : surfaces) {
        FluxSurfaceReport r;
        r.initial = flux_core([M](const Vec3&, const MapSample&) { return M; }, S, nullptr);
        r.transported = flux_core(B, S, lm);
        r.difference = std::fabs(r.transported - r.initial);
        const Vec3 c = S.f(0.5 * (S.a0 + S.a1), 0.5 * (S.b0 + S.b1));
        for (int axis = 0; axis < 3; ++axis) {
            ParamSurface patch = axis_patch(c, axis, patch_side);
            patch.quad = 4;
            const double f = flux_core(B, patch, lm) / (patch_side * patch_side);
            r.converse = std::max(r.converse, std::fabs(f - M[axis]));
        }
        rep.max_difference = std::max(rep.max_difference, r.difference);
        rep.max_converse = std::max(rep.max_converse, r.converse);
        rep.surfaces.push_back(r);
    }
    return rep;
}

}  // namespace mhdi
