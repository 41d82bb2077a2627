#pragma once

// Critical impressed-field strengths from the one-dimensional Rayleigh quotient
//
//     gamma = sup  int w psi^2 / ||psi'||^2   over psi in H^1_0(a, b),
//
// with m = sqrt((g / lambda) gamma). The weight w is rho' for the
// Rayleigh-Taylor threshold and -alpha beta Theta' for the Benard threshold.

#include "mhd_inhibit/model.hpp"

#include <optional>
#include <vector>

namespace mhdi {

struct ThresholdResult {
    double m = 0.0;
    double gamma = 0.0;
    double a = 0.0;
    double b = 1.0;
    std::vector<double> psi0;  // all n nodes including the two zero endpoints
    int n_grid = 0;
    bool converged = false;
    std::optional<double> richardson_estimate;
    int bisection_steps = 0;
    double residual = 0.0;  // relative residual of the discrete eigenpair
};

struct ThresholdOptions {
    double tol = 1e-8;
    bool richardson = true;
};

/// Largest eigenvalue of the lumped pencil W psi = gamma K psi on the uniform
/// grid with weight.size() nodes over [a, b]. Endpoint weights are ignored.
ThresholdResult threshold_1d(const std::vector<double>& weight, double a, double b,
                             const PhysicalParams& params, const ThresholdOptions& opt = {});

/// Rayleigh-Taylor threshold m_N from the density profile, using n nodes on [domain.a, domain.b].
ThresholdResult threshold_nmrt(const Profile1D& density, const SlabDomain& domain,
                               const PhysicalParams& params, int n, const ThresholdOptions& opt = {});

/// Magnetic Benard threshold m_B from the temperature profile (weight -alpha_beta Theta').
ThresholdResult threshold_benard(const Profile1D& temperature, const SlabDomain& domain,
                                 const PhysicalParams& params, int n, const ThresholdOptions& opt = {});

/// Two-layer threshold with the interface at 0, upper height h and lower depth l.
/// psi0 samples the piecewise-linear maximizer on n nodes over [-l, h].
ThresholdResult threshold_stratified(double rho_plus, double rho_minus, double h, double l,
                                     const PhysicalParams& params, int n = 1001);

/// Piecewise-linear maximizer of the stratified quotient: 1 + s/l below 0, 1 - s/h above.
double stratified_psi(double s, double h, double l);

/// g [rho] psi(0)^2 / (lambda ||psi'||^2) evaluated for the explicit maximizer.
double stratified_maximizer_quotient(double rho_plus, double rho_minus, double h, double l,
                                     const PhysicalParams& params);

/// Same quotient for an arbitrary continuous grid function psi on [-l, h]
/// (the node at s = 0 must exist); ||psi'||^2 by the discrete difference sum.
double stratified_quotient(const std::vector<double>& psi, double rho_plus, double rho_minus, double h,
                           double l, const PhysicalParams& params);

/// Horizontal wave data of the test field for a given magnetic direction.
struct TestWave {
    double alpha = 0.0;  // phase z = alpha y1 + beta y2
    double beta = 0.0;
    Vec3 d{0.0, 1.0, 0.0};  // horizontal direction carrying psi' cos z
    double dk = 0.0;        // d . (alpha, beta)
};

/// Wave vector with n1 alpha + n2 beta = 0, so that the n-derivative of the test
/// field reduces to the vertical derivative. For n = e3 this is z = i y2 / L2.
TestWave test_wave(int i, const Vec3& direction, const SlabDomain& domain);

/// Rayleigh quotient g int w v3^2 / (lambda ||d_n v||^2) of the test field
/// v = (psi' cos z) d + (d.k) psi sin z e3 with the horizontal integrals done
/// exactly. psi and weight live on the same uniform grid over [domain.a, domain.b].
double test_sequence_quotient(int i, const std::vector<double>& psi, const std::vector<double>& weight,
                              const SlabDomain& domain, const PhysicalParams& params,
                              const Vec3& direction = {0.0, 0.0, 1.0});

/// Exact integrals of sin^2 z and cos^2 z over the periodic cell.
struct TrigIntegrals {
    double sin2 = 0.0;
    double cos2 = 0.0;
};
TrigIntegrals trig_integrals(double alpha, double beta, const SlabDomain& domain);

}  // namespace mhdi
