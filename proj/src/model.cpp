#include "mhd_inhibit/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mhdi {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void PhysicalParams::validate() const {
    if (!(g > 0.0) || !finite(g)) throw InvalidArgument("params.g: must be a positive finite number");
    if (!(lambda > 0.0) || !finite(lambda))
        throw InvalidArgument("params.lambda: must be a positive finite number");
    if (!(mu >= 0.0) || !finite(mu)) throw InvalidArgument("params.mu: must be nonnegative");
    for (double c : M_bar)
        if (!finite(c)) throw InvalidArgument("params.M_bar: components must be finite");
    if (!(alpha_beta >= 0.0) || !finite(alpha_beta))
        throw InvalidArgument("params.alpha_beta: must be nonnegative");
}

void PhysicalParams::require_field() const {
    if (M_bar[0] == 0.0 && M_bar[1] == 0.0 && M_bar[2] == 0.0)
        throw InvalidArgument("params.M_bar: impressed field must have a nonzero component");
}

void SlabDomain::validate() const {
    if (!finite(a) || !finite(b) || !(a < b)) throw InvalidArgument("domain: requires a < b");
    if (!(L1 > 0.0) || !(L2 > 0.0)) throw InvalidArgument("domain: L1 and L2 must be positive");
    if (interface && !(a < *interface && *interface < b))
        throw InvalidArgument("domain.interface: must lie strictly between a and b");
}

double SlabDomain::cell_area() const { return 4.0 * kPi * kPi * L1 * L2; }

double Grid3D::y1(int i) const { return -kPi * domain.L1 + i * h1; }
double Grid3D::y2(int j) const { return -kPi * domain.L2 + j * h2; }

std::size_t Grid3D::index(int i, int j, int k) const {
    i %= n1;
    if (i < 0) i += n1;
    j %= n2;
    if (j < 0) j += n2;
    return (static_cast<std::size_t>(k) * n2 + j) * n1 + i;
}

std::optional<int> Grid3D::interface_index() const {
    if (!domain.interface) return std::nullopt;
    double pos = (*domain.interface - domain.a) / h3;
    double r = std::round(pos);
    if (std::fabs(pos - r) > 1e-9) return std::nullopt;
    return static_cast<int>(r);
}

Grid3D make_uniform_grid(const SlabDomain& domain, int n1, int n2, int n3) {
    domain.validate();
    if (n1 < 4 || n2 < 4)
        throw InvalidArgument("make_uniform_grid: horizontal counts must be >= 4 (under-resolved grid)");
    if (n3 < 8) throw InvalidArgument("make_uniform_grid: vertical count must be >= 8 (under-resolved grid)");
    Grid3D g;
    g.domain = domain;
    g.n1 = n1;
    g.n2 = n2;
    g.n3 = n3;
    g.h1 = 2.0 * kPi * domain.L1 / n1;
    g.h2 = 2.0 * kPi * domain.L2 / n2;
    g.h3 = domain.height() / (n3 - 1);
    return g;
}

VectorField3 sample_field(const Grid3D& grid, const FieldFunction& f, BoundaryKind boundary) {
    VectorField3 out(grid.size());
    out.boundary = boundary;
    if (f.gradient) out.gradient.resize(grid.size());
    if (f.hessian) out.hessian.resize(grid.size());
    for (int k = 0; k < grid.n3; ++k)
        for (int j = 0; j < grid.n2; ++j)
            for (int i = 0; i < grid.n1; ++i) {
                const std::size_t n = grid.index(i, j, k);
                const Vec3 y = grid.position(i, j, k);
                out.set(n, f.value(y));
                if (f.gradient) out.gradient[n] = f.gradient(y);
                if (f.hessian) out.hessian[n] = f.hessian(y);
            }
    return out;
}

ScalarField sample_scalar(const Grid3D& grid, const std::function<double(const Vec3&)>& f) {
    ScalarField out(grid.size());
    for (int k = 0; k < grid.n3; ++k)
        for (int j = 0; j < grid.n2; ++j)
            for (int i = 0; i < grid.n1; ++i) out[grid.index(i, j, k)] = f(grid.position(i, j, k));
    return out;
}

namespace {

// d/dy_dir of a scalar grid function at (i, j, k).
double fd_partial(const ScalarField& f, const Grid3D& g, int i, int j, int k, int dir) {
    switch (dir) {
        case 0:
            return (f[g.index(i + 1, j, k)] - f[g.index(i - 1, j, k)]) / (2.0 * g.h1);
        case 1:
            return (f[g.index(i, j + 1, k)] - f[g.index(i, j - 1, k)]) / (2.0 * g.h2);
        default:
            if (k == 0)
                return (-3.0 * f[g.index(i, j, 0)] + 4.0 * f[g.index(i, j, 1)] - f[g.index(i, j, 2)]) /
                       (2.0 * g.h3);
            if (k == g.n3 - 1)
                return (3.0 * f[g.index(i, j, k)] - 4.0 * f[g.index(i, j, k - 1)] + f[g.index(i, j, k - 2)]) /
                       (2.0 * g.h3);
            return (f[g.index(i, j, k + 1)] - f[g.index(i, j, k - 1)]) / (2.0 * g.h3);
    }
}

}  // namespace

std::vector<Mat3> fd_gradient(const VectorField3& field, const Grid3D& grid) {
    std::vector<Mat3> out(grid.size());
    for (int k = 0; k < grid.n3; ++k)
        for (int j = 0; j < grid.n2; ++j)
            for (int i = 0; i < grid.n1; ++i) {
                Mat3& m = out[grid.index(i, j, k)];
                for (int c = 0; c < 3; ++c)
                    for (int d = 0; d < 3; ++d) m(c, d) = fd_partial(field.comp[c], grid, i, j, k, d);
            }
    return out;
}

std::vector<Mat3> gradient_of(const VectorField3& field, const Grid3D& grid) {
    if (field.has_gradient()) return field.gradient;
    return fd_gradient(field, grid);
}

ScalarField divergence(const VectorField3& field, const Grid3D& grid) {
    ScalarField out(grid.size());
    for (int k = 0; k < grid.n3; ++k)
        for (int j = 0; j < grid.n2; ++j)
            for (int i = 0; i < grid.n1; ++i) {
                double d = 0.0;
                for (int c = 0; c < 3; ++c) d += fd_partial(field.comp[c], grid, i, j, k, c);
                out[grid.index(i, j, k)] = d;
            }
    return out;
}

double integrate_nodes(const Grid3D& grid, const std::function<double(std::size_t, int)>& f) {
    double total = 0.0;
    for (int k = 0; k < grid.n3; ++k) {
        double layer = 0.0;
        for (int j = 0; j < grid.n2; ++j)
            for (int i = 0; i < grid.n1; ++i) layer += f(grid.index(i, j, k), k);
        total += layer * grid.vertical_weight(k);
    }
    return total * grid.h1 * grid.h2;
}

double integrate(const ScalarField& f, const Grid3D& grid) {
    return integrate_nodes(grid, [&](std::size_t n, int) { return f[n]; });
}

double l2_norm_sq(const VectorField3& v, const Grid3D& grid) {
    return integrate_nodes(grid, [&](std::size_t n, int) {
        const Vec3 x = v.at(n);
        return dot(x, x);
    });
}

double sup_norm(const ScalarField& f) {
    double r = 0.0;
    for (double x : f.values) r = std::fmax(r, std::fabs(x));
    return r;
}

double sup_norm(const VectorField3& v) {
    double r = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) r = std::fmax(r, norm(v.at(n)));
    return r;
}

double boundary_sup_norm(const VectorField3& v, const Grid3D& grid) {
    double r = 0.0;
    for (int k : {0, grid.n3 - 1})
        for (int j = 0; j < grid.n2; ++j)
            for (int i = 0; i < grid.n1; ++i) r = std::fmax(r, norm(v.at(grid.index(i, j, k))));
    return r;
}

// ---------------------------------------------------------------------------
// ProfileShape
// ---------------------------------------------------------------------------

ProfileShape ProfileShape::linear(double c0, double slope) { return {Form::linear, {c0, slope}}; }

ProfileShape ProfileShape::exponential(double c0, double c1, double rate) {
    if (rate == 0.0) throw InvalidArgument("exponential profile: rate must be nonzero");
    return {Form::exponential, {c0, c1, rate}};
}

ProfileShape ProfileShape::sinusoidal(double c0, double amplitude, double freq, double phase) {
    if (freq == 0.0) throw InvalidArgument("sinusoidal profile: frequency must be nonzero");
    return {Form::sinusoidal, {c0, amplitude, freq, phase}};
}

ProfileShape ProfileShape::bump(double c0, double amplitude, double center, double half_width) {
    if (!(half_width > 0.0)) throw InvalidArgument("bump profile: half width must be positive");
    return {Form::bump, {c0, amplitude, center, half_width}};
}

ProfileShape ProfileShape::from_name(const std::string& name, std::vector<double> c) {
    auto need = [&](std::size_t k) {
        if (c.size() != k)
            throw InvalidArgument("profile.coefficients: form '" + name + "' takes " + std::to_string(k) +
                                  " coefficients");
    };
    if (name == "linear") {
        need(2);
        return linear(c[0], c[1]);
    }
    if (name == "exponential") {
        need(3);
        return exponential(c[0], c[1], c[2]);
    }
    if (name == "sinusoidal") {
        need(4);
        return sinusoidal(c[0], c[1], c[2], c[3]);
    }
    if (name == "bump") {
        need(4);
        return bump(c[0], c[1], c[2], c[3]);
    }
    throw InvalidArgument("profile.form: unknown form '" + name + "'");
}

std::string ProfileShape::name() const {
    switch (form) {
        case Form::linear: return "linear";
        case Form::exponential: return "exponential";
        case Form::sinusoidal: return "sinusoidal";
        case Form::bump: return "bump";
    }
    return "unknown";
}

namespace {

// Bump helpers in the scaled variable s in [-1, 1].
double bump_G(double s) { return s - 2.0 * s * s * s / 3.0 + std::pow(s, 5) / 5.0 + 8.0 / 15.0; }
double bump_K(double s) {
    return s * s / 2.0 - std::pow(s, 4) / 6.0 + std::pow(s, 6) / 30.0 + 8.0 * s / 15.0;
}

}  // namespace

double ProfileShape::value(double y) const {
    const auto& c = coeffs;
    switch (form) {
        case Form::linear: return c[0] + c[1] * y;
        case Form::exponential: return c[0] + c[1] * std::exp(c[2] * y);
        case Form::sinusoidal: return c[0] + c[1] * std::sin(c[2] * y + c[3]);
        case Form::bump: {
            const double s = std::clamp((y - c[2]) / c[3], -1.0, 1.0);
            return c[0] + c[1] * c[3] * bump_G(s);
        }
    }
    return 0.0;
}

double ProfileShape::d1(double y) const {
    const auto& c = coeffs;
    switch (form) {
        case Form::linear: return c[1];
        case Form::exponential: return c[1] * c[2] * std::exp(c[2] * y);
        case Form::sinusoidal: return c[1] * c[2] * std::cos(c[2] * y + c[3]);
        case Form::bump: {
            const double s = (y - c[2]) / c[3];
            if (std::fabs(s) >= 1.0) return 0.0;
            const double q = 1.0 - s * s;
            return c[1] * q * q;
        }
    }
    return 0.0;
}

double ProfileShape::d2(double y) const {
    const auto& c = coeffs;
    switch (form) {
        case Form::linear: return 0.0;
        case Form::exponential: return c[1] * c[2] * c[2] * std::exp(c[2] * y);
        case Form::sinusoidal: return -c[1] * c[2] * c[2] * std::sin(c[2] * y + c[3]);
        case Form::bump: {
            const double s = (y - c[2]) / c[3];
            if (std::fabs(s) >= 1.0) return 0.0;
            return -4.0 * c[1] * s * (1.0 - s * s) / c[3];
        }
    }
    return 0.0;
}

double ProfileShape::antiderivative(double y) const {
    const auto& c = coeffs;
    switch (form) {
        case Form::linear: return c[0] * y + 0.5 * c[1] * y * y;
        case Form::exponential: return c[0] * y + c[1] / c[2] * std::exp(c[2] * y);
        case Form::sinusoidal: return c[0] * y - c[1] / c[2] * std::cos(c[2] * y + c[3]);
        case Form::bump: {
            const double w = c[3];
            const double lo = c[2] - w;
            const double hi = c[2] + w;
            double r = c[0] * y;
            if (y <= lo) return r;
            if (y < hi) return r + c[1] * w * w * (bump_K((y - c[2]) / w) - bump_K(-1.0));
            return r + c[1] * w * (w * 16.0 / 15.0 + 16.0 / 15.0 * (y - hi));
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Profile1D
// ---------------------------------------------------------------------------

namespace {

double interp_uniform(const std::vector<double>& v, double a, double b, double y) {
    const int n = static_cast<int>(v.size());
    const double h = (b - a) / (n - 1);
    double t = (y - a) / h;
    t = std::clamp(t, 0.0, static_cast<double>(n - 1));
    int k = std::min(static_cast<int>(t), n - 2);
    const double f = t - k;
    return (1.0 - f) * v[k] + f * v[k + 1];
}

void check_profile(const Profile1D& p) {
    if (p.n() < 5) throw InvalidArgument("profile: requires at least 3 interior nodes");
    if (!(p.a < p.b)) throw InvalidArgument("profile: requires a < b");
    for (std::size_t k = 0; k < p.values.size(); ++k)
        if (!std::isfinite(p.values[k]) || !std::isfinite(p.derivative[k]))
            throw InvalidArgument("profile: non-finite sample at node " + std::to_string(k));
    if (p.kind == ProfileKind::density) {
        const double lo = *std::min_element(p.values.begin(), p.values.end());
        if (!(lo > 0.0)) throw InvalidArgument("profile: density must be positive everywhere");
    }
}

}  // namespace

double Profile1D::value_at(double y) const {
    if (shape) return shape->value(y);
    return interp_uniform(values, a, b, y);
}

double Profile1D::derivative_at(double y) const {
    if (shape) return shape->d1(y);
    return interp_uniform(derivative, a, b, y);
}

bool Profile1D::covers(double lo, double hi) const {
    const double tol = 1e-12 * std::max(1.0, b - a);
    return a <= lo + tol && hi <= b + tol;
}

Profile1D make_profile(const ProfileShape& shape, ProfileKind kind, double a, double b, int n) {
    Profile1D p;
    p.kind = kind;
    p.a = a;
    p.b = b;
    p.shape = shape;
    if (n < 5) throw InvalidArgument("profile: requires at least 3 interior nodes");
    p.values.resize(n);
    p.derivative.resize(n);
    const double h = (b - a) / (n - 1);
    for (int k = 0; k < n; ++k) {
        const double y = a + k * h;
        p.values[k] = shape.value(y);
        p.derivative[k] = shape.d1(y);
    }
    check_profile(p);
    return p;
}

Profile1D make_profile_from_samples(std::span<const double> y, std::span<const double> values,
                                    std::span<const double> derivative, ProfileKind kind) {
    if (y.size() != values.size() || y.size() != derivative.size())
        throw InvalidArgument("profile: column lengths differ");
    if (y.size() < 5) throw InvalidArgument("profile: requires at least 3 interior nodes");
    const double h = (y.back() - y.front()) / static_cast<double>(y.size() - 1);
    for (std::size_t k = 1; k < y.size(); ++k)
        if (std::fabs((y[k] - y[k - 1]) - h) > 1e-9 * std::max(1.0, std::fabs(h)))
            throw InvalidArgument("profile: y grid must be uniform (row " + std::to_string(k) + ")");
    Profile1D p;
    p.kind = kind;
    p.a = y.front();
    p.b = y.back();
    p.values.assign(values.begin(), values.end());
    p.derivative.assign(derivative.begin(), derivative.end());
    check_profile(p);
    return p;
}

Profile1D load_profile_csv(const std::string& path, ProfileKind kind) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("profile.csv: cannot open '" + path + "'");
    std::vector<double> y, v, d;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a, b, c;
        if (!(ss >> a >> b >> c)) {
            if (lineno == 1) continue;  // header
            throw InvalidArgument("profile.csv: malformed row " + std::to_string(lineno) + " in '" + path + "'");
        }
        y.push_back(a);
        v.push_back(b);
        d.push_back(c);
    }
    return make_profile_from_samples(y, v, d, kind);
}

}  // namespace mhdi
