#pragma once

// Single vertical mode of a damped Alfven string with a gravitational destabilizer:
//
//     eta'' + nu eta' + s eta = 0,   k = n pi / h,   nu = mu k^2 / rho,
//     s = a^2 k^2 - g rho' / rho,    a^2 = lambda M3^2 / rho.
//
// For constant rho' the n = 1 stiffness vanishes exactly at |M3| = (h / pi) sqrt(g rho' / lambda).

#include "mhd_inhibit/model.hpp"

#include <array>
#include <complex>
#include <vector>

namespace mhdi {

struct ModeSpec {
    int n = 1;
    double rho_bar = 1.0;
    double rho_prime = 0.0;
    PhysicalParams params;
    double h = 1.0;

    void validate() const;
    double k() const;
    double nu() const;
    double alfven_speed_sq() const;
    double stiffness() const;
};

struct ModeState {
    double eta = 0.0;
    double eta_dot = 0.0;
    double t = 0.0;
};

struct ModeSample {
    double t = 0.0;
    double eta = 0.0;
    double eta_dot = 0.0;
    double E = 0.0;  // (eta_dot^2 + s eta^2) / 2
};

/// Roots of r^2 + nu r + s = 0, larger real part first.
std::array<std::complex<double>, 2> characteristic_roots(const ModeSpec& spec);
double growth_rate(const ModeSpec& spec);

/// Exact solution of the mode equation at time t.
ModeState closed_form_solution(const ModeSpec& spec, const ModeState& initial, double t);

/// RK4 with uniform steps; requires dt <= 0.1 / max(1, max |root|).
std::vector<ModeSample> simulate_mode(const ModeSpec& spec, const ModeState& initial, double T, double dt);

/// max_t |eta_num - eta_exact| / max_t |eta_exact| over a simulated series.
double trajectory_error(const std::vector<ModeSample>& series, const ModeSpec& spec, const ModeState& initial);

struct ScanRow {
    double M3 = 0.0;
    double growth_rate = 0.0;  // max over 1 <= n <= n_max
    int argmax_n = 1;
};

/// Growth rates of the template spec with M_bar[2] replaced by each value.
std::vector<ScanRow> stability_boundary_scan(const ModeSpec& tmpl, const std::vector<double>& M3_values,
                                             int n_max = 32);

struct EnergyAuditReport {
    double max_residual = 0.0;  // max_t |E(t) + int_0^t nu eta_dot^2 - E(0)|
    double E0 = 0.0;
    double E_final = 0.0;
    double dissipated = 0.0;
};

EnergyAuditReport energy_audit(const std::vector<ModeSample>& series, const ModeSpec& spec);

}  // namespace mhdi
