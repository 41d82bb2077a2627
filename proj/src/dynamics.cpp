#include "mhd_inhibit/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>

namespace mhdi {

void ModeSpec::validate() const {
    params.validate();
    if (n < 1) throw InvalidArgument("mode: n must be >= 1");
    if (!(rho_bar > 0.0)) throw InvalidArgument("mode: rho_bar must be positive");
    if (!std::isfinite(rho_prime)) throw InvalidArgument("mode: rho_prime must be finite");
    if (!(h > 0.0)) throw InvalidArgument("mode: h must be positive");
}

double ModeSpec::k() const { return n * std::numbers::pi / h; }
double ModeSpec::nu() const { return params.mu / rho_bar * k() * k(); }
double ModeSpec::alfven_speed_sq() const { return params.lambda / rho_bar * params.M_bar[2] * params.M_bar[2]; }
double ModeSpec::stiffness() const { return alfven_speed_sq() * k() * k() - params.g * rho_prime / rho_bar; }

std::array<std::complex<double>, 2> characteristic_roots(const ModeSpec& spec) {
    spec.validate();
    const double nu = spec.nu(), s = spec.stiffness();
    const double D = nu * nu - 4.0 * s;
    if (D < 0.0) {
        const double im = 0.5 * std::sqrt(-D);
        return {std::complex<double>(-0.5 * nu, im), std::complex<double>(-0.5 * nu, -im)};
    }
    // Stable form: the root of larger magnitude first, the other from the product s.
    const double big = -0.5 * (nu + std::sqrt(D));
    const double small = big != 0.0 ? s / big : 0.0;
    return {std::complex<double>(std::max(big, small), 0.0), std::complex<double>(std::min(big, small), 0.0)};
}

double growth_rate(const ModeSpec& spec) { return characteristic_roots(spec)[0].real(); }

ModeState closed_form_solution(const ModeSpec& spec, const ModeState& initial, double t) {
    const double nu = spec.nu(), s = spec.stiffness();
    const double D = nu * nu - 4.0 * s;
    const double w = 0.5 * std::sqrt(std::fabs(D));
    const double tau = t - initial.t;
    double C, S, dC, dS;
    if (w == 0.0) {
        C = 1.0, S = tau, dC = 0.0, dS = 1.0;
    } else if (D > 0.0) {
        C = std::cosh(w * tau), S = std::sinh(w * tau) / w, dC = w * std::sinh(w * tau), dS = std::cosh(w * tau);
    } else {
        C = std::cos(w * tau), S = std::sin(w * tau) / w, dC = -w * std::sin(w * tau), dS = std::cos(w * tau);
    }
    const double env = std::exp(-0.5 * nu * tau);
    const double b = initial.eta_dot + 0.5 * nu * initial.eta;
    ModeState r;
    r.t = t;
    r.eta = env * (initial.eta * C + b * S);
    r.eta_dot = env * (initial.eta * dC + b * dS) - 0.5 * nu * r.eta;
    return r;
}

std::vector<ModeSample> simulate_mode(const ModeSpec& spec, const ModeState& initial, double T, double dt) {
    const auto roots = characteristic_roots(spec);
    const double rmax = std::max(std::abs(roots[0]), std::abs(roots[1]));
    if (!(dt > 0.0) || dt > 0.1 / std::max(1.0, rmax) * (1.0 + 1e-12))
        throw InvalidArgument("simulate_mode: dt must satisfy 0 < dt <= 0.1 / max(1, |root|)");
    if (!(T > 0.0)) throw InvalidArgument("simulate_mode: T must be positive");
    if (!std::isfinite(initial.eta) || !std::isfinite(initial.eta_dot))
        throw InvalidArgument("simulate_mode: initial state must be finite");

    const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
    const double step = T / steps;
    const double nu = spec.nu(), s = spec.stiffness();
    auto energy = [s](double x, double v) { return 0.5 * (v * v + s * x * x); };

    std::vector<ModeSample> out;
    out.reserve(steps + 1);
    double x = initial.eta, v = initial.eta_dot;
    out.push_back({initial.t, x, v, energy(x, v)});
    for (long i = 0; i < steps; ++i) {
        const double k1x = v, k1v = -nu * v - s * x;
        const double x2 = x + 0.5 * step * k1x, v2 = v + 0.5 * step * k1v;
        const double k2x = v2, k2v = -nu * v2 - s * x2;
        const double x3 = x + 0.5 * step * k2x, v3 = v + 0.5 * step * k2v;
        const double k3x = v3, k3v = -nu * v3 - s * x3;
        const double x4 = x + step * k3x, v4 = v + step * k3v;
        const double k4x = v4, k4v = -nu * v4 - s * x4;
        x += step / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        out.push_back({initial.t + (i + 1) * step, x, v, energy(x, v)});
    }
    return out;
}

double trajectory_error(const std::vector<ModeSample>& series, const ModeSpec& spec, const ModeState& initial) {
    double err = 0.0, scale = 0.0;
    for (const ModeSample& p : series) {
        const ModeState e = closed_form_solution(spec, initial, p.t);
        err = std::max(err, std::fabs(p.eta - e.eta));
        scale = std::max(scale, std::fabs(e.eta));
    }
    return scale > 0.0 ? err / scale : err;
}

std::vector<ScanRow> stability_boundary_scan(const ModeSpec& tmpl, const std::vector<double>& M3_values, int n_max) {
    tmpl.validate();
    if (n_max < 1) throw InvalidArgument("stability_boundary_scan: n_max must be >= 1");
    std::vector<ScanRow> rows;
    for (double M3 : M3_values) {
        ModeSpec s = tmpl;
        s.params.M_bar[2] = M3;
        ScanRow r;
        r.M3 = M3;
        r.growth_rate = -std::numeric_limits<double>::infinity();
        for (int n = 1; n <= n_max; ++n) {
            s.n = n;
            const double g = growth_rate(s);
            if (g > r.growth_rate) {
                r.growth_rate = g;
                r.argmax_n = n;
            }
        }
        rows.push_back(r);
    }
    return rows;
}

EnergyAuditReport energy_audit(const std::vector<ModeSample>& series, const ModeSpec& spec) {
    if (series.empty()) throw InvalidArgument("energy_audit: empty series");
    const double nu = spec.nu();
    EnergyAuditReport r;
    r.E0 = series.front().E;
    double diss = 0.0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const ModeSample& p = series[i - 1];
        const ModeSample& q = series[i];
        diss += 0.5 * (q.t - p.t) * nu * (p.eta_dot * p.eta_dot + q.eta_dot * q.eta_dot);
        r.max_residual = std::max(r.max_residual, std::fabs(q.E + diss - r.E0));
    }
    r.E_final = series.back().E;
    r.dissipated = diss;
    return r;
}

}  // namespace mhdi
