#include "mhd_inhibit/dynamics.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

using namespace mhdi;
using std::numbers::pi;

namespace {

ModeSpec spec(double M3, double mu = 0.0, int n = 1) {
    ModeSpec s;
    s.n = n;
    s.rho_bar = 1.0;
    s.rho_prime = 1.0;
    s.h = pi;
    s.params.M_bar = {0.0, 0.0, M3};
    s.params.mu = mu;
    return s;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("mode coefficients") {
    ModeSpec s = spec(2.0, 0.1, 3);
    s.rho_bar = 2.0;
    s.h = 1.5;
    const double k = 3 * pi / 1.5;
    CHECK(s.k() == doctest::Approx(k));
    CHECK(s.nu() == doctest::Approx(0.1 * k * k / 2.0));
    CHECK(s.alfven_speed_sq() == doctest::Approx(4.0 / 2.0));
    CHECK(s.stiffness() == doctest::Approx(2.0 * k * k - 0.5));
    s.rho_bar = 0.0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("characteristic roots against the companion matrix") {
    for (double M3 : {0.5, 0.99, 1.0, 1.01, 3.0})
        for (double mu : {0.0, 0.1, 2.0}) {
            const ModeSpec s = spec(M3, mu);
            const auto r = characteristic_roots(s);
            Eigen::Matrix2d C;
            C << 0.0, 1.0, -s.stiffness(), -s.nu();
            const Eigen::Vector2cd ev = C.eigenvalues();
            const double ref = std::max(ev[0].real(), ev[1].real());
            CHECK(r[0].real() == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
            CHECK(r[0].real() >= r[1].real());
            for (const auto& z : r) CHECK(std::abs(z * z + s.nu() * z + s.stiffness()) < 1e-10);
        }
}

TEST_CASE("stable root formula keeps small roots accurate") {
    ModeSpec s = spec(1.0 + 1e-7, 50.0);
    const auto r = characteristic_roots(s);
    // Product of the roots equals the stiffness.
    CHECK((r[0] * r[1]).real() == doctest::Approx(s.stiffness()).epsilon(1e-10));
}

TEST_CASE("growth rate sign changes at the closed-form threshold") {
    CHECK(growth_rate(spec(0.99)) > 0.0);
    CHECK(growth_rate(spec(1.01)) <= 0.0);
    CHECK(growth_rate(spec(1.0)) == doctest::Approx(0.0).scale(1.0));
    CHECK(growth_rate(spec(0.5)) == doctest::Approx(std::sqrt(0.75)));
}

TEST_CASE("RK4 trajectories follow the closed form") {
    for (double M3 : {0.5, 1.0, 1.5})
        for (double mu : {0.0, 0.05}) {
            const ModeSpec s = spec(M3, mu);
            const ModeState init{1.0, 0.3, 0.0};
            const auto series = simulate_mode(s, init, 20.0, 1e-3);
            CHECK(series.size() == 20001);
            CHECK(series.back().t == doctest::Approx(20.0));
            CHECK(trajectory_error(series, s, init) < 1e-6);
        }
}

TEST_CASE("closed form at the degenerate stiffness") {
    const ModeSpec s = spec(1.0);
    const ModeState x = closed_form_solution(s, {2.0, 0.5, 0.0}, 4.0);
    CHECK(x.eta == doctest::Approx(4.0));
    CHECK(x.eta_dot == doctest::Approx(0.5));
}

TEST_CASE("energy audit balances dissipation") {
    for (double mu : {0.0, 0.2}) {
        const ModeSpec s = spec(2.0, mu);
        const auto series = simulate_mode(s, {1.0, 0.0, 0.0}, 20.0, 1e-3);
        const EnergyAuditReport a = energy_audit(series, s);
        CHECK(a.max_residual < 1e-6);
        if (mu == 0.0) CHECK(a.dissipated == 0.0);
        else CHECK(a.dissipated > 0.0);
        CHECK(a.E0 == doctest::Approx(0.5 * s.stiffness()));
    }
}

TEST_CASE("time step must resolve the fastest root") {
    const ModeSpec s = spec(20.0);
    CHECK_THROWS_AS(simulate_mode(s, {1.0, 0.0, 0.0}, 1.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(simulate_mode(s, {1.0, 0.0, 0.0}, -1.0, 1e-3), InvalidArgument);
    CHECK_THROWS_AS(simulate_mode(s, {NAN, 0.0, 0.0}, 1.0, 1e-3), InvalidArgument);
}

TEST_CASE("boundary scan maximizes over vertical modes") {
    const std::vector<double> M3{0.0, 0.5, 0.99, 1.01, 2.0};
    const auto rows = stability_boundary_scan(spec(0.0), M3, 8);
    REQUIRE(rows.size() == M3.size());
    CHECK(rows[0].growth_rate == doctest::Approx(1.0));
    CHECK(rows[1].argmax_n == 1);
    CHECK(rows[2].growth_rate > 0.0);
    CHECK(rows[3].growth_rate <= 0.0);
    CHECK(rows[4].growth_rate < rows[3].growth_rate + 1e-15);
    CHECK_THROWS_AS(stability_boundary_scan(spec(0.0), M3, 0), InvalidArgument);
}

}
