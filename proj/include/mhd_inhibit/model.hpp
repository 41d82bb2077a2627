#pragma once

// Physical parameters, slab domains, uniform grids, grid fields and 1D profiles.
//
// Horizontal coordinates y1, y2 live on the periodic cell
// (-pi L1, pi L1) x (-pi L2, pi L2); node i sits at -pi L + i h, so the
// rectangle rule over the n nodes is the periodic trapezoid rule. The vertical
// coordinate runs over [a, b] with nodes on both walls.

#include "mhd_inhibit/errors.hpp"
#include "mhd_inhibit/small_matrix.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mhdi {

struct PhysicalParams {
    double g = 1.0;       // gravitational constant
    double lambda = 1.0;  // vacuum permeability / 4 pi
    double mu = 0.0;      // shear viscosity
    Vec3 M_bar{0.0, 0.0, 1.0};
    double alpha_beta = 0.0;  // expansion coefficient times beta (Benard case)

    void validate() const;
    /// Throws when the impressed field is identically zero.
    void require_field() const;
};

struct SlabDomain {
    double a = 0.0;
    double b = 1.0;
    double L1 = 1.0;
    double L2 = 1.0;
    std::optional<double> interface;

    void validate() const;
    double height() const { return b - a; }
    /// Measure of the horizontal periodic cell, 4 pi^2 L1 L2.
    double cell_area() const;
};

struct Grid3D {
    SlabDomain domain;
    int n1 = 0, n2 = 0, n3 = 0;
    double h1 = 0.0, h2 = 0.0, h3 = 0.0;

    std::size_t size() const { return static_cast<std::size_t>(n1) * n2 * n3; }
    double y1(int i) const;
    double y2(int j) const;
    double y3(int k) const { return domain.a + k * h3; }
    Vec3 position(int i, int j, int k) const { return {y1(i), y2(j), y3(k)}; }

    /// Linear index with periodic wrap in i and j; k must be in range.
    std::size_t index(int i, int j, int k) const;
    /// Vertical node index of the interface, if it coincides with a node.
    std::optional<int> interface_index() const;
    /// Trapezoid weight of node layer k (half weight on the walls).
    double vertical_weight(int k) const { return (k == 0 || k == n3 - 1) ? 0.5 * h3 : h3; }
};

/// Uniform tensor grid; throws InvalidArgument when n1, n2 < 4 or n3 < 8.
Grid3D make_uniform_grid(const SlabDomain& domain, int n1, int n2, int n3);

/// Scalar values at grid nodes, stored in Grid3D::index order.
struct ScalarField {
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(std::size_t n, double fill = 0.0) : values(n, fill) {}
    double& operator[](std::size_t n) { return values[n]; }
    double operator[](std::size_t n) const { return values[n]; }
    std::size_t size() const { return values.size(); }
};

enum class BoundaryKind { vanishing, periodic_vertical, none };

/// Three-component grid field. Optional analytic first and second derivatives
/// travel with the samples; operations fall back to finite differences
/// when they are absent.
struct VectorField3 {
    std::array<ScalarField, 3> comp;
    BoundaryKind boundary = BoundaryKind::none;
    std::vector<Mat3> gradient;      // d_j v_i, empty when not analytic
    std::vector<Hessian3> hessian;   // d_j d_k v_i, empty when not analytic

    VectorField3() = default;
    explicit VectorField3(std::size_t n) : comp{ScalarField(n), ScalarField(n), ScalarField(n)} {}

    std::size_t size() const { return comp[0].size(); }
    Vec3 at(std::size_t n) const { return {comp[0][n], comp[1][n], comp[2][n]}; }
    void set(std::size_t n, const Vec3& v) {
        comp[0][n] = v[0];
        comp[1][n] = v[1];
        comp[2][n] = v[2];
    }
    bool has_gradient() const { return !gradient.empty(); }
    bool has_hessian() const { return !hessian.empty(); }
};

/// Closed-form vector field with exact derivatives, used to sample VectorField3.
struct FieldFunction {
    std::function<Vec3(const Vec3&)> value;
    std::function<Mat3(const Vec3&)> gradient;        // optional
    std::function<Hessian3(const Vec3&)> hessian;     // optional
};

VectorField3 sample_field(const Grid3D& grid, const FieldFunction& f,
                          BoundaryKind boundary = BoundaryKind::none);
ScalarField sample_scalar(const Grid3D& grid, const std::function<double(const Vec3&)>& f);

/// Centered second-order gradient; periodic horizontally, one-sided
/// second-order on the top and bottom node layers.
std::vector<Mat3> fd_gradient(const VectorField3& field, const Grid3D& grid);
/// Analytic gradient when carried by the field, finite differences otherwise.
std::vector<Mat3> gradient_of(const VectorField3& field, const Grid3D& grid);

/// Centered-difference divergence (same stencils as fd_gradient).
ScalarField divergence(const VectorField3& field, const Grid3D& grid);

/// Trapezoid-rule volume integral over one periodic cell of the slab.
double integrate(const ScalarField& f, const Grid3D& grid);
/// Integral of a per-node function given as a callback on the linear index.
double integrate_nodes(const Grid3D& grid, const std::function<double(std::size_t, int k)>& f);
/// ||v||_0^2 over the slab.
double l2_norm_sq(const VectorField3& v, const Grid3D& grid);
double sup_norm(const ScalarField& f);
double sup_norm(const VectorField3& v);
/// Largest |v| over the bottom and top node layers.
double boundary_sup_norm(const VectorField3& v, const Grid3D& grid);

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

enum class ProfileKind { density, temperature };

/// Closed-form one-dimensional profile with derivatives and antiderivative.
///
///   linear:      c0 + c1 y
///   exponential: c0 + c1 exp(c2 y)
///   sinusoidal:  c0 + c1 sin(c2 y + c3)
///   bump:        c0 + integral of A (1 - s^2)^2, s = (y - c) / w, coefficients {c0, A, c, w}
struct ProfileShape {
    enum class Form { linear, exponential, sinusoidal, bump };
    Form form = Form::linear;
    std::vector<double> coeffs;

    static ProfileShape linear(double c0, double slope);
    static ProfileShape exponential(double c0, double c1, double rate);
    static ProfileShape sinusoidal(double c0, double amplitude, double freq, double phase);
    static ProfileShape bump(double c0, double amplitude, double center, double half_width);
    /// Parses "linear" | "exponential" | "sinusoidal" | "bump".
    static ProfileShape from_name(const std::string& name, std::vector<double> coeffs);
    std::string name() const;

    double value(double y) const;
    double d1(double y) const;
    double d2(double y) const;
    /// Some antiderivative R with R' = value.
    double antiderivative(double y) const;
};

/// Profile sampled on a uniform grid over [a, b], optionally backed by a
/// closed form. The closed form, when present, is used for all evaluations.
struct Profile1D {
    ProfileKind kind = ProfileKind::density;
    double a = 0.0;
    double b = 1.0;
    std::vector<double> values;
    std::vector<double> derivative;
    std::optional<ProfileShape> shape;

    int n() const { return static_cast<int>(values.size()); }
    double spacing() const { return (b - a) / (n() - 1); }
    double value_at(double y) const;
    double derivative_at(double y) const;
    bool covers(double lo, double hi) const;
};

Profile1D make_profile(const ProfileShape& shape, ProfileKind kind, double a, double b, int n);
/// From tabulated (y, value, derivative); y must be uniform with at least 3 interior nodes.
Profile1D make_profile_from_samples(std::span<const double> y, std::span<const double> values,
                                    std::span<const double> derivative, ProfileKind kind);
/// Profile from a CSV with columns y, value, derivative (header line optional).
Profile1D load_profile_csv(const std::string& path, ProfileKind kind);

}  // namespace mhdi
