#include "mhd_inhibit/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mhdi {

namespace {

constexpr double kPi = std::numbers::pi;

// Number of eigenvalues of the pencil (W, K) strictly above gamma: the count of
// negative pivots in the LDL^T factorization of gamma K - W (Sylvester inertia).
int count_above(const std::vector<double>& wh, double inv_h, double gamma) {
    const double off = -gamma * inv_h;
    const double off2 = off * off;
    const double tiny = std::numeric_limits<double>::min() * 1e10;
    int neg = 0;
    double d = 0.0;
    for (std::size_t k = 0; k < wh.size(); ++k) {
        double a = 2.0 * gamma * inv_h - wh[k];
        d = (k == 0) ? a : a - off2 / d;
        if (d == 0.0) d = -tiny;
        if (d < 0.0) ++neg;
    }
    return neg;
}

// Solves the symmetric tridiagonal system (diag, off) x = rhs in place.
void thomas(std::vector<double> diag, double off, std::vector<double>& x) {
    const std::size_t n = diag.size();
    const double scale = std::max(std::fabs(off), 1e-300);
    for (std::size_t k = 1; k < n; ++k) {
        if (std::fabs(diag[k - 1]) < 1e-14 * scale) diag[k - 1] = 1e-14 * scale;
        const double f = off / diag[k - 1];
        diag[k] -= f * off;
        x[k] -= f * x[k - 1];
    }
    if (std::fabs(diag[n - 1]) < 1e-14 * scale) diag[n - 1] = 1e-14 * scale;
    x[n - 1] /= diag[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) x[k] = (x[k] - off * x[k + 1]) / diag[k];
}

// K x for interior values x (zero Dirichlet data).
std::vector<double> apply_K(const std::vector<double>& x, double inv_h) {
    const std::size_t n = x.size();
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) {
        double v = 2.0 * x[k];
        if (k > 0) v -= x[k - 1];
        if (k + 1 < n) v -= x[k + 1];
        r[k] = v * inv_h;
    }
    return r;
}

double dotv(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s;
}

struct Eigenpair {
    double gamma = 0.0;
    std::vector<double> x;  // interior values
    int steps = 0;
    double residual = 0.0;
};

Eigenpair largest_eigenpair(const std::vector<double>& weight, double a, double b) {
    const int n = static_cast<int>(weight.size());
    const int N = n - 2;
    const double h = (b - a) / (n - 1);
    const double inv_h = 1.0 / h;
    std::vector<double> wh(N);
    double wmax = 0.0;
    for (int k = 0; k < N; ++k) {
        wh[k] = weight[k + 1] * h;
        wmax = std::max(wmax, std::fabs(weight[k + 1]));
    }

    Eigenpair out;
    if (wmax == 0.0) {
        // W = 0: every vector attains gamma = 0; report the smoothest one.
        out.x.resize(N);
        for (int k = 0; k < N; ++k) out.x[k] = std::sin(kPi * (k + 1) / (N + 1));
        return out;
    }

    const double s = std::sin(kPi / (2.0 * (N + 1)));
    const double lam_min = 4.0 * inv_h * s * s;
    const double bound = wmax * h / lam_min * (1.0 + 1e-12);
    double lo = -bound, hi = bound;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (count_above(wh, inv_h, mid) > 0)
            lo = mid;
        else
            hi = mid;
        ++out.steps;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(lo), std::fabs(hi)))
            break;
    }

    // Inverse iteration (W - sigma K) x = K y with sigma just above the top eigenvalue.
    const double sigma = hi;
    std::vector<double> diag(N);
    for (int k = 0; k < N; ++k) diag[k] = wh[k] - 2.0 * sigma * inv_h;
    const double off = sigma * inv_h;
    std::vector<double> x(N, 1.0);
    for (int it = 0; it < 6; ++it) {
        std::vector<double> rhs = apply_K(x, inv_h);
        thomas(diag, off, rhs);
        const double nrm = std::sqrt(dotv(rhs, rhs));
        for (int k = 0; k < N; ++k) x[k] = rhs[k] / nrm;
    }

    const std::vector<double> Kx = apply_K(x, inv_h);
    double xWx = 0.0;
    for (int k = 0; k < N; ++k) xWx += wh[k] * x[k] * x[k];
    const double xKx = dotv(x, Kx);
    out.gamma = xWx / xKx;

    double rn = 0.0, wn = 0.0, kn = 0.0;
    for (int k = 0; k < N; ++k) {
        const double wx = wh[k] * x[k];
        const double r = wx - out.gamma * Kx[k];
        rn += r * r;
        wn += wx * wx;
        kn += Kx[k] * Kx[k];
    }
    out.residual = std::sqrt(rn) / (std::sqrt(wn) + std::fabs(out.gamma) * std::sqrt(kn));
    out.x = std::move(x);
    return out;
}

void check_weight(const std::vector<double>& weight) {
    for (std::size_t k = 0; k < weight.size(); ++k)
        if (!std::isfinite(weight[k]))
            throw InvalidArgument("threshold: non-finite profile derivative at node " + std::to_string(k));
}

std::vector<double> sample_weight(const Profile1D& p, const SlabDomain& domain, int n, double factor) {
    if (!p.covers(domain.a, domain.b)) throw InvalidArgument("threshold: profile does not cover the domain");
    std::vector<double> w(n);
    const double h = domain.height() / (n - 1);
    for (int k = 0; k < n; ++k) w[k] = factor * p.derivative_at(domain.a + k * h);
    return w;
}

}  // namespace

ThresholdResult threshold_1d(const std::vector<double>& weight, double a, double b,
                             const PhysicalParams& params, const ThresholdOptions& opt) {
    params.validate();
    const int n = static_cast<int>(weight.size());
    if (n < 64) throw InvalidArgument("threshold_1d: n must be >= 64");
    if (!(a < b)) throw InvalidArgument("threshold_1d: requires a < b");
    check_weight(weight);

    Eigenpair ep = largest_eigenpair(weight, a, b);
    const double h = (b - a) / (n - 1);

    ThresholdResult r;
    r.a = a;
    r.b = b;
    r.n_grid = n;
    r.gamma = ep.gamma;
    r.m = std::sqrt(std::max(0.0, params.g * ep.gamma / params.lambda));
    r.bisection_steps = ep.steps;
    r.residual = ep.residual;
    r.converged = ep.residual <= opt.tol;

    // Deterministic sign: the entry of largest magnitude is positive.
    std::size_t imax = 0;
    for (std::size_t k = 0; k < ep.x.size(); ++k)
        if (std::fabs(ep.x[k]) > std::fabs(ep.x[imax])) imax = k;
    const double sgn = ep.x[imax] < 0.0 ? -1.0 : 1.0;

    r.psi0.assign(n, 0.0);
    for (int k = 1; k < n - 1; ++k) r.psi0[k] = sgn * ep.x[k - 1];
    double dn = 0.0;
    for (int k = 0; k + 1 < n; ++k) {
        const double d = r.psi0[k + 1] - r.psi0[k];
        dn += d * d;
    }
    dn = std::sqrt(dn / h);
    for (double& v : r.psi0) v /= dn;

    if (opt.richardson && (n - 1) % 2 == 0 && (n - 1) / 2 + 1 >= 5) {
        std::vector<double> coarse;
        for (int k = 0; k < n; k += 2) coarse.push_back(weight[k]);
        const double gc = largest_eigenpair(coarse, a, b).gamma;
        r.richardson_estimate = (4.0 * ep.gamma - gc) / 3.0;
    }
    return r;
}

ThresholdResult threshold_nmrt(const Profile1D& density, const SlabDomain& domain,
                               const PhysicalParams& params, int n, const ThresholdOptions& opt) {
    domain.validate();
    if (density.kind != ProfileKind::density) throw InvalidArgument("threshold_nmrt: expected a density profile");
    if (n < 64) throw InvalidArgument("threshold_nmrt: n must be >= 64");
    return threshold_1d(sample_weight(density, domain, n, 1.0), domain.a, domain.b, params, opt);
}

ThresholdResult threshold_benard(const Profile1D& temperature, const SlabDomain& domain,
                                 const PhysicalParams& params, int n, const ThresholdOptions& opt) {
    domain.validate();
    if (temperature.kind != ProfileKind::temperature)
        throw InvalidArgument("threshold_benard: expected a temperature profile");
    if (!(params.alpha_beta > 0.0)) throw InvalidArgument("threshold_benard: params.alpha_beta must be positive");
    if (n < 64) throw InvalidArgument("threshold_benard: n must be >= 64");
    return threshold_1d(sample_weight(temperature, domain, n, -params.alpha_beta), domain.a, domain.b, params,
                        opt);
}

double stratified_psi(double s, double h, double l) { return s <= 0.0 ? 1.0 + s / l : 1.0 - s / h; }

ThresholdResult threshold_stratified(double rho_plus, double rho_minus, double h, double l,
                                     const PhysicalParams& params, int n) {
    params.validate();
    if (!(h > 0.0) || !(l > 0.0)) throw InvalidArgument("threshold_stratified: h and l must be positive");
    if (!(rho_plus > 0.0) || !(rho_minus > 0.0))
        throw InvalidArgument("threshold_stratified: densities must be positive");
    if (n < 3) throw InvalidArgument("threshold_stratified: n must be >= 3");
    const double jump = rho_plus - rho_minus;
    ThresholdResult r;
    r.a = -l;
    r.b = h;
    r.n_grid = n;
    r.gamma = jump / (1.0 / h + 1.0 / l);
    r.m = jump > 0.0 ? std::sqrt((params.g * jump / params.lambda) / (1.0 / h + 1.0 / l)) : 0.0;
    r.converged = true;
    r.psi0.resize(n);
    const double dy = (h + l) / (n - 1);
    for (int k = 0; k < n; ++k) r.psi0[k] = stratified_psi(-l + k * dy, h, l);
    r.psi0.front() = 0.0;
    r.psi0.back() = 0.0;
    return r;
}

double stratified_maximizer_quotient(double rho_plus, double rho_minus, double h, double l,
                                     const PhysicalParams& params) {
    if (!(h > 0.0) || !(l > 0.0)) throw InvalidArgument("stratified_maximizer_quotient: h and l must be positive");
    const double psi_at_0 = stratified_psi(0.0, h, l);
    // ||psi'||^2: slope 1/l over length l plus slope 1/h over length h.
    const double dpsi2 = (1.0 / l) * (1.0 / l) * l + (1.0 / h) * (1.0 / h) * h;
    return params.g * (rho_plus - rho_minus) * psi_at_0 * psi_at_0 / (params.lambda * dpsi2);
}

double stratified_quotient(const std::vector<double>& psi, double rho_plus, double rho_minus, double h,
                           double l, const PhysicalParams& params) {
    const int n = static_cast<int>(psi.size());
    if (n < 3) throw InvalidArgument("stratified_quotient: need at least 3 nodes");
    const double dy = (h + l) / (n - 1);
    const double pos = l / dy;
    const int k0 = static_cast<int>(std::lround(pos));
    if (std::fabs(pos - k0) > 1e-9) throw InvalidArgument("stratified_quotient: interface is not a grid node");
    double d2 = 0.0;
    for (int k = 0; k + 1 < n; ++k) {
        const double d = psi[k + 1] - psi[k];
        d2 += d * d;
    }
    d2 /= dy;
    return params.g * (rho_plus - rho_minus) * psi[k0] * psi[k0] / (params.lambda * d2);
}

TestWave test_wave(int i, const Vec3& n, const SlabDomain& domain) {
    TestWave w;
    if (n[0] != 0.0) {
        w.beta = i / domain.L2;
        w.alpha = -n[1] * w.beta / n[0];
        w.d = {0.0, 1.0, 0.0};
        w.dk = w.beta;
    } else if (n[1] != 0.0) {
        w.alpha = i / domain.L1;
        w.beta = 0.0;
        w.d = {1.0, 0.0, 0.0};
        w.dk = w.alpha;
    } else {
        w.alpha = 0.0;
        w.beta = i / domain.L2;
        w.d = {0.0, 1.0, 0.0};
        w.dk = w.beta;
    }
    return w;
}

namespace {

// int_{-A}^{A} cos(2 kappa y) dy
double cos_integral(double kappa, double A) { return kappa == 0.0 ? 2.0 * A : std::sin(2.0 * kappa * A) / kappa; }

}  // namespace

TrigIntegrals trig_integrals(double alpha, double beta, const SlabDomain& domain) {
    const double half = 0.5 * domain.cell_area();
    const double I = cos_integral(alpha, kPi * domain.L1) * cos_integral(beta, kPi * domain.L2);
    return {half - 0.5 * I, half + 0.5 * I};
}

double test_sequence_quotient(int i, const std::vector<double>& psi, const std::vector<double>& weight,
                              const SlabDomain& domain, const PhysicalParams& params, const Vec3& direction) {
    if (i < 1) throw InvalidArgument("test_sequence_quotient: i must be >= 1");
    if (psi.size() != weight.size() || psi.size() < 5)
        throw InvalidArgument("test_sequence_quotient: psi and weight must share a grid of >= 5 nodes");
    if (direction[2] != 1.0) throw InvalidArgument("test_sequence_quotient: direction must have third component 1");
    const int n = static_cast<int>(psi.size());
    const double h = domain.height() / (n - 1);

    double P = 0.0, Q1 = 0.0, Q2 = 0.0;
    for (int k = 1; k < n - 1; ++k) {
        P += weight[k] * psi[k] * psi[k];
        const double d2 = (psi[k + 1] - 2.0 * psi[k] + psi[k - 1]) / (h * h);
        Q2 += d2 * d2;
    }
    P *= h;
    Q2 *= h;
    for (int k = 0; k + 1 < n; ++k) {
        const double d = psi[k + 1] - psi[k];
        Q1 += d * d;
    }
    Q1 /= h;

    const TestWave w = test_wave(i, direction, domain);
    const TrigIntegrals t = trig_integrals(w.alpha, w.beta, domain);
    const double dk2 = w.dk * w.dk;
    return params.g * dk2 * P * t.sin2 / (params.lambda * (Q2 * t.cos2 + dk2 * Q1 * t.sin2));
}

}  // namespace mhdi
