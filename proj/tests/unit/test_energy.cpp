#include "mhd_inhibit/energy.hpp"
#include "mhd_inhibit/random_fields.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mhdi;
using std::numbers::pi;

namespace {

// eta = (s sin y3 cos y1, 0, c sin y3 sin y1) with exact gradient.
VectorField3 trig_displacement(const Grid3D& g, double s, double c) {
    FieldFunction f;
    f.value = [=](const Vec3& y) {
        return Vec3{s * std::sin(y[2]) * std::cos(y[0]), 0.0, c * std::sin(y[2]) * std::sin(y[0])};
    };
    f.gradient = [=](const Vec3& y) {
        Mat3 m{};
        m(0, 0) = -s * std::sin(y[2]) * std::sin(y[0]);
        m(0, 2) = s * std::cos(y[2]) * std::cos(y[0]);
        m(2, 0) = c * std::sin(y[2]) * std::cos(y[0]);
        m(2, 2) = c * std::cos(y[2]) * std::sin(y[0]);
        return m;
    };
    return sample_field(g, f, BoundaryKind::vanishing);
}

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("magnetic variation of a sheared displacement") {
    const SlabDomain d{0.0, pi, 1.0, 1.0};
    const Grid3D g = make_uniform_grid(d, 8, 8, 33);
    PhysicalParams p;
    p.lambda = 2.0;
    const VectorField3 eta = trig_displacement(g, 0.3, 0.0);
    const MagneticVariation mv = magnetic_energy_variation(eta, p, g);
    // lambda s^2 int cos^2 y1 cos^2 y3 = lambda s^2 (2 pi^2)(pi / 2)
    CHECK(mv.V_M == doctest::Approx(2.0 * 0.09 * 2 * pi * pi * pi / 2).epsilon(1e-12));
    CHECK(mv.cross_term == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mv.delta_M == doctest::Approx(0.5 * mv.V_M));
}

TEST_CASE("potential variation identity on volume-preserving flows") {
    const SlabDomain d{0.0, pi, 1.0, 1.0};
    const Grid3D g = make_uniform_grid(d, 8, 8, 65);
    const Profile1D rho = make_profile(ProfileShape::exponential(0.5, 1.0, 0.4), ProfileKind::density, 0, pi, 257);
    PhysicalParams p;
    for (std::uint64_t seed : {1u, 2u}) {
        auto w = std::make_shared<SolenoidalField>(random_solenoidal(d, seed, {4, 1, 2, 0.3}));
        const FlowMap m = flow_from_divfree_field(w, g, 1.0, 64);
        const PotentialVariation pv = potential_variation_exact(m, rho, p);
        CHECK(pv.volume_preserving);
        REQUIRE(std::fabs(pv.delta_direct) > 1e-6);
        CHECK(std::fabs(-pv.V_star - pv.delta_direct) / std::fabs(pv.delta_direct) < 1e-4);
    }
    const Profile1D sampled = load_profile_csv(MHDI_TEST_DATA "/linear_profile.csv", ProfileKind::density);
    const FlowMap id = build_flow_map(std::make_shared<IdentityMap>(), g);
    CHECK_THROWS_AS(potential_variation_exact(id, sampled, p), InvalidArgument);
}

TEST_CASE("cubic remainder vanishes for constant density gradient") {
    const SlabDomain d{0.0, pi, 1.0, 1.0};
    const Grid3D g = make_uniform_grid(d, 8, 8, 17);
    const Profile1D rho = make_profile(ProfileShape::linear(1.0, 0.7), ProfileKind::density, -1.0, pi + 1.0, 101);
    const VectorField3 eta = trig_displacement(g, 0.2, 0.4);
    CHECK(std::fabs(cubic_remainder(eta, rho, PhysicalParams{}, g)) <= 1e-12);
}

TEST_CASE("cubic remainder equals the exact Taylor remainder") {
    const SlabDomain d{0.0, pi, 1.0, 1.0};
    const Grid3D g = make_uniform_grid(d, 8, 8, 17);
    const ProfileShape s = ProfileShape::sinusoidal(3.0, 0.5, 1.2, 0.3);
    const Profile1D rho = make_profile(s, ProfileKind::density, -1.0, pi + 1.0, 101);
    PhysicalParams p;
    p.g = 2.0;
    const VectorField3 eta = trig_displacement(g, 0.0, 0.6);
    const double exact = p.g * integrate_nodes(g, [&](std::size_t n, int k) {
        const double y = g.y3(k), e = eta.comp[2][n];
        return s.antiderivative(y + e) - s.antiderivative(y) - s.value(y) * e - 0.5 * s.d1(y) * e * e;
    });
    CHECK(cubic_remainder(eta, rho, p, g) == doctest::Approx(exact).epsilon(1e-10));
    const CubicRemainderReport rep = cubic_remainder_bound_check(eta, rho, p, g);
    CHECK(rep.holds);
    CHECK(rep.c == doctest::Approx(p.g * 0.5 * 1.44 / 2).epsilon(1e-3));
    CHECK(std::fabs(rep.N) <= rep.bound);
}

TEST_CASE("cubic remainder scales with the cube of the amplitude") {
    const SlabDomain d{0.0, pi, 1.0, 1.0};
    const Grid3D g = make_uniform_grid(d, 8, 8, 17);
    const Profile1D rho = make_profile(ProfileShape::exponential(0.0, 1.0, 1.0), ProfileKind::density, -1, pi + 1, 101);
    double prev = 0.0;
    for (double eps : {0.125, 0.0625}) {
        FieldFunction f{[&](const Vec3& y) { return Vec3{0.0, 0.0, 0.1 * eps * std::sin(y[2])}; }, {}, {}};
        const double r = cubic_remainder(sample_field(g, f), rho, PhysicalParams{}, g) / (eps * eps * eps);
        if (prev != 0.0) CHECK(std::fabs(r - prev) / std::fabs(prev) < 0.01);
        prev = r;
    }
}

TEST_CASE("energy report assembles the second-order functional") {
    const SlabDomain d{0.0, pi, 1.0, 1.0};
    const Grid3D g = make_uniform_grid(d, 8, 8, 17);
    const Profile1D rho = make_profile(ProfileShape::linear(2.0, 1.0), ProfileKind::density, -1, pi + 1, 101);
    PhysicalParams p;
    p.M_bar = {0.0, 0.0, 2.0};
    const VectorField3 eta = trig_displacement(g, 0.0, 0.1);
    const EnergyReport r = energy_report(eta, rho, p, g);
    CHECK(r.N_grho == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.V_star == doctest::Approx(0.5 * r.V_grho));
    CHECK(r.delta_EP == doctest::Approx(0.5 * r.V_M - r.V_star));
    // int sin^2 y1 sin^2 y3 = pi^3, and |d_3 eta3|^2 M3^2 integrates to 4 * 0.01 pi^3.
    CHECK(r.V_grho == doctest::Approx(0.01 * pi * pi * pi).epsilon(1e-12));
    CHECK(r.V_M == doctest::Approx(0.04 * pi * pi * pi).epsilon(1e-12));
}

TEST_CASE("interface functionals and their bound") {
    SlabDomain d{-1.0, 1.0, 1.0, 1.0};
    d.interface = 0.0;
    const Grid3D g = make_uniform_grid(d, 16, 16, 17);
    FieldFunction f;
    const double c = 0.05;
    f.value = [c](const Vec3& y) {
        return Vec3{c * std::sin(y[0]), c * std::cos(y[1]), std::cos(0.5 * pi * y[2]) * (1.0 + 0.2 * std::cos(y[0]))};
    };
    f.gradient = [c](const Vec3& y) {
        Mat3 m{};
        m(0, 0) = c * std::cos(y[0]);
        m(1, 1) = -c * std::sin(y[1]);
        m(2, 0) = -0.2 * std::sin(y[0]) * std::cos(0.5 * pi * y[2]);
        m(2, 2) = -0.5 * pi * std::sin(0.5 * pi * y[2]) * (1.0 + 0.2 * std::cos(y[0]));
        return m;
    };
    const VectorField3 eta = sample_field(g, f);
    PhysicalParams p;
    const StratifiedFunctionals s = stratified_surface_functionals(eta, g, 3.0, 1.0, p);
    // int over the cell of (1 + 0.2 cos y1)^2 = 4 pi^2 (1 + 0.02)
    CHECK(s.V_jump == doctest::Approx(2.0 * 4 * pi * pi * 1.02).epsilon(1e-12));
    CHECK(s.grad_h_sup == doctest::Approx(c * std::sqrt(2.0)).epsilon(1e-3));
    CHECK(s.holds);
    d.interface = 0.1;
    CHECK_THROWS_AS(stratified_surface_functionals(eta, make_uniform_grid(d, 16, 16, 17), 3.0, 1.0, p),
                    InvalidArgument);
}

TEST_CASE("Poincare inequality and its equality case") {
    const SlabDomain d{0.0, 2.0, 1.0, 1.0};
    const Grid3D g = make_uniform_grid(d, 8, 8, 65);
    FieldFunction f;
    f.value = [](const Vec3& y) { return Vec3{std::sin(pi * y[2] / 2.0), 0.0, 0.0}; };
    f.gradient = [](const Vec3& y) {
        Mat3 m{};
        m(0, 2) = pi / 2.0 * std::cos(pi * y[2] / 2.0);
        return m;
    };
    const PoincareCheck eq = poincare_check(sample_field(g, f, BoundaryKind::vanishing), {0, 0, 1}, PhysicalParams{}, g);
    CHECK(std::fabs(eq.lhs - eq.rhs) <= 1e-10 * eq.rhs);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SolenoidalField w = random_solenoidal(d, seed);
        const PoincareCheck r =
            poincare_check(sample_field(g, w.as_function(), BoundaryKind::vanishing), {0.3, -0.1, 1.0}, PhysicalParams{}, g);
        CHECK(r.holds);
    }
    CHECK_THROWS_AS(poincare_check(sample_field(g, f), {0, 0, 2}, PhysicalParams{}, g), InvalidArgument);
}

}
