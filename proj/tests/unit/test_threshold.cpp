#include "mhd_inhibit/threshold.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

using namespace mhdi;
using std::numbers::pi;

namespace {

// Dense generalized eigenvalues of the same lumped pencil (tests/oracles/threshold_oracle.py).
constexpr double kCos501 = 0.26386556874633044;
constexpr double kCos1001 = 0.26386365790691063;
constexpr double kCos2001 = 0.263863180201079;
constexpr double kCosRichardson = 0.2638630209658018;
constexpr double kConst250 = 1.0000132654888523;
constexpr double kConst500 = 1.0000033030737412;
constexpr double kConst1000 = 1.0000008241151728;
constexpr double kConst2001 = 1.0000002056174093;

std::vector<double> sampled(int n, double a, double b, double (*w)(double)) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = w(a + (b - a) * k / (n - 1));
    return v;
}

double cosine(double y) { return std::cos(y); }
double one(double) { return 1.0; }

double dense_gamma(const std::vector<double>& w, double a, double b) {
    const int n = static_cast<int>(w.size());
    const int m = n - 2;
    const double h = (b - a) / (n - 1);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m), W = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        K(i, i) = 2.0 / h;
        if (i + 1 < m) K(i, i + 1) = K(i + 1, i) = -1.0 / h;
        W(i, i) = w[i + 1] * h;
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(W, K);
    return es.eigenvalues().maxCoeff();
}

}  // namespace

TEST_SUITE("threshold") {

TEST_CASE("largest pencil eigenvalue matches the dense oracle") {
    const PhysicalParams p;
    CHECK(threshold_1d(sampled(501, 0, pi, cosine), 0, pi, p).gamma == doctest::Approx(kCos501).epsilon(1e-11));
    CHECK(threshold_1d(sampled(1001, 0, pi, cosine), 0, pi, p).gamma == doctest::Approx(kCos1001).epsilon(1e-11));
    const ThresholdResult r = threshold_1d(sampled(2001, 0, pi, cosine), 0, pi, p);
    CHECK(r.gamma == doctest::Approx(kCos2001).epsilon(1e-11));
    REQUIRE(r.richardson_estimate.has_value());
    CHECK(*r.richardson_estimate == doctest::Approx(kCosRichardson).epsilon(1e-11));
    CHECK(r.converged);
    CHECK(threshold_1d(sampled(250, 0, pi, one), 0, pi, p).gamma == doctest::Approx(kConst250).epsilon(1e-11));
    CHECK(threshold_1d(sampled(500, 0, pi, one), 0, pi, p).gamma == doctest::Approx(kConst500).epsilon(1e-11));
    CHECK(threshold_1d(sampled(1000, 0, pi, one), 0, pi, p).gamma == doctest::Approx(kConst1000).epsilon(1e-11));
    CHECK(threshold_1d(sampled(2001, 0, pi, one), 0, pi, p).gamma == doctest::Approx(kConst2001).epsilon(1e-11));
}

TEST_CASE("sign-changing weights against an in-process dense solve") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<double> w(120);
        for (double& x : w) x = U(rng);
        const double ref = dense_gamma(w, -1.0, 2.0);
        CHECK(threshold_1d(w, -1.0, 2.0, PhysicalParams{}).gamma == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("eigenvector normalization and sign") {
    const ThresholdResult r = threshold_1d(sampled(401, 0, pi, one), 0, pi, PhysicalParams{});
    const double h = pi / 400;
    double dn = 0.0;
    for (int k = 0; k < 400; ++k) dn += std::pow(r.psi0[k + 1] - r.psi0[k], 2) / h;
    CHECK(dn == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.psi0.front() == 0.0);
    CHECK(r.psi0.back() == 0.0);
    CHECK(r.psi0[200] > 0.0);
    // The constant-weight maximizer is sin(y) up to scale.
    for (int k : {50, 100, 300}) CHECK(r.psi0[k] / r.psi0[200] == doctest::Approx(std::sin(k * h)).epsilon(1e-4));
}

TEST_CASE("second-order convergence on the constant profile") {
    const PhysicalParams p;
    double prev = 0.0;
    for (int n : {250, 500, 1000, 2000}) {
        const double err = threshold_1d(sampled(n, 0, pi, one), 0, pi, p).gamma - 1.0;
        if (prev != 0.0) {
            CHECK(prev / err > 3.5);
            CHECK(prev / err < 4.5);
        }
        prev = err;
    }
}

TEST_CASE("threshold scales with g / lambda and the slab height") {
    PhysicalParams p;
    p.g = 4.0;
    p.lambda = 0.25;
    const SlabDomain d{1.0, 3.0};
    const Profile1D rho = make_profile(ProfileShape::linear(1.0, 2.0), ProfileKind::density, 1.0, 3.0, 201);
    const ThresholdResult r = threshold_nmrt(rho, d, p, 1001);
    const double closed = 2.0 / pi * std::sqrt(4.0 * 2.0 / 0.25);
    CHECK(r.m == doctest::Approx(closed).epsilon(1e-5));
}

TEST_CASE("stable stratification gives a zero threshold") {
    const Profile1D rho = make_profile(ProfileShape::linear(5.0, -1.0), ProfileKind::density, 0.0, 1.0, 51);
    const ThresholdResult r = threshold_nmrt(rho, SlabDomain{0.0, 1.0}, PhysicalParams{}, 257);
    CHECK(r.gamma <= 0.0);
    CHECK(r.m == 0.0);
}

TEST_CASE("Benard threshold equals the density threshold with the matching weight") {
    PhysicalParams p;
    p.alpha_beta = 0.5;
    const SlabDomain d{0.0, 2.0};
    const Profile1D rho = make_profile(ProfileShape::sinusoidal(2.0, 0.7, 1.9, 0.4), ProfileKind::density, 0, 2, 401);
    // Theta = -rho / alpha_beta, so -alpha_beta Theta' = rho'.
    const Profile1D theta =
        make_profile(ProfileShape::sinusoidal(-4.0, -1.4, 1.9, 0.4), ProfileKind::temperature, 0, 2, 401);
    const double a = threshold_nmrt(rho, d, p, 1001).m;
    const double b = threshold_benard(theta, d, p, 1001).m;
    CHECK(std::fabs(a - b) <= 1e-12 * a);
    p.alpha_beta = 0.0;
    CHECK_THROWS_AS(threshold_benard(theta, d, p, 1001), InvalidArgument);
    p.alpha_beta = 1.0;
    CHECK_THROWS_AS(threshold_benard(rho, d, p, 1001), InvalidArgument);
}

TEST_CASE("threshold preconditions") {
    const PhysicalParams p;
    CHECK_THROWS_AS(threshold_1d(std::vector<double>(32, 1.0), 0, 1, p), InvalidArgument);
    CHECK_THROWS_AS(threshold_1d(std::vector<double>(100, 1.0), 1, 0, p), InvalidArgument);
    const Profile1D rho = make_profile(ProfileShape::linear(1.0, 1.0), ProfileKind::density, 0.0, 1.0, 51);
    CHECK_THROWS_AS(threshold_nmrt(rho, SlabDomain{0.0, 2.0}, p, 201), InvalidArgument);
}

TEST_CASE("stratified maximizer quotient reproduces the closed form") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.1, 5.0);
    PhysicalParams p;
    p.g = 9.81;
    p.lambda = 0.3;
    for (int t = 0; t < 10; ++t) {
        const double h = U(rng), l = U(rng), rm = U(rng), rp = rm + U(rng);
        const double mS2 = (p.g * (rp - rm) / p.lambda) / (1.0 / h + 1.0 / l);
        const double q = stratified_maximizer_quotient(rp, rm, h, l, p);
        CHECK(std::fabs(q - mS2) <= 1e-12 * mS2);
        CHECK(threshold_stratified(rp, rm, h, l, p).m == doctest::Approx(std::sqrt(mS2)).epsilon(1e-14));
    }
}

TEST_CASE("piecewise-linear profile maximizes the stratified quotient") {
    const double h = 1.5, l = 0.5;
    const int n = 201;
    const double dy = (h + l) / (n - 1);
    std::vector<double> lin(n), bent(n);
    for (int k = 0; k < n; ++k) {
        const double s = -l + k * dy;
        lin[k] = stratified_psi(s, h, l);
        bent[k] = std::sin(pi * (s + l) / (h + l));
    }
    lin.front() = lin.back() = 0.0;
    const PhysicalParams p;
    const double best = stratified_quotient(lin, 2.0, 1.0, h, l, p);
    CHECK(best == doctest::Approx(stratified_maximizer_quotient(2.0, 1.0, h, l, p)).epsilon(1e-12));
    CHECK(stratified_quotient(bent, 2.0, 1.0, h, l, p) < best);
    CHECK(stratified_psi(0.0, h, l) == 1.0);
    CHECK(stratified_psi(h, h, l) == 0.0);
    CHECK(stratified_psi(-l, h, l) == 0.0);
}

TEST_CASE("test waves are orthogonal to the field direction") {
    const SlabDomain d{0.0, 1.0, 1.5, 0.5};
    for (const Vec3& n : {Vec3{0, 0, 1}, Vec3{0.3, 0, 1}, Vec3{0, -2, 1}, Vec3{0.4, 0.7, 1}}) {
        const TestWave w = test_wave(5, n, d);
        CHECK(n[0] * w.alpha + n[1] * w.beta == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(w.d[0] * w.alpha + w.d[1] * w.beta == doctest::Approx(w.dk));
        CHECK(w.dk != 0.0);
    }
    const TestWave e3 = test_wave(4, {0, 0, 1}, d);
    CHECK(e3.alpha == 0.0);
    CHECK(e3.beta == doctest::Approx(4.0 / 0.5));
}

TEST_CASE("exact horizontal integrals") {
    const SlabDomain d{0.0, 1.0, 1.0, 1.0};
    const double cell = d.cell_area();
    TrigIntegrals t = trig_integrals(0.0, 3.0, d);
    CHECK(t.sin2 == doctest::Approx(cell / 2));
    CHECK(t.cos2 == doctest::Approx(cell / 2));
    t = trig_integrals(0.0, 0.0, d);
    CHECK(t.sin2 == doctest::Approx(0.0));
    CHECK(t.cos2 == doctest::Approx(cell));
    // Non-periodic frequency: compare with brute-force quadrature.
    const double al = 0.37, be = 1.0;
    double s = 0.0;
    const int m = 2000;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < 50; ++j) {
            const double y1 = -pi + 2 * pi * (i + 0.5) / m, y2 = -pi + 2 * pi * (j + 0.5) / 50;
            s += std::pow(std::sin(al * y1 + be * y2), 2);
        }
    s *= cell / (m * 50.0);
    CHECK(trig_integrals(al, be, d).sin2 == doctest::Approx(s).epsilon(1e-5));
}

TEST_CASE("test-sequence quotients approach the threshold from below") {
    const int n = 1001;
    const SlabDomain d{0.0, pi};
    const std::vector<double> w = sampled(n, 0, pi, one);
    const ThresholdResult r = threshold_1d(w, 0, pi, PhysicalParams{});
    double prev = 0.0;
    for (int i : {4, 8, 16, 32, 64}) {
        const double q = test_sequence_quotient(i, r.psi0, w, d, PhysicalParams{});
        CHECK(q > prev);
        CHECK(q < r.gamma);
        prev = q;
    }
    CHECK(prev == doctest::Approx(r.gamma).epsilon(0.02));
    CHECK_THROWS_AS(test_sequence_quotient(0, r.psi0, w, d, PhysicalParams{}), InvalidArgument);
}

}
