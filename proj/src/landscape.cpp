#include "mhd_inhibit/landscape.hpp"

#include "mhd_inhibit/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace mhdi {

namespace {

constexpr double kPi = std::numbers::pi;

// Quintic smoothstep and its derivatives on [0, 1].
double S0(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double S1(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }
double S2(double t) { return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t); }
// Antiderivative of S0 with IS(0) = 0, IS(1) = 1/2.
double IS(double t) { return t * t * t * t * (2.5 + t * (-3.0 + t)); }

VectorField3 scale_field(const VectorField3& v, double s) {
    VectorField3 r = v;
    for (auto& c : r.comp)
        for (double& x : c.values) x *= s;
    for (Mat3& g : r.gradient) g = s * g;
    for (Hessian3& h : r.hessian)
        for (Mat3& m : h) m = s * m;
    return r;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

int points_needed(double kappa, double L, int minimum) {
    const int waves = static_cast<int>(std::ceil(std::fabs(kappa) * L - 1e-12));
    return std::max(minimum, 8 * std::max(waves, 1));
}

double max_second_derivative(const Profile1D& p, double lo, double hi) {
    double m = 0.0;
    const int samples = 4001;
    for (int q = 0; q < samples; ++q) {
        const double y = lo + (hi - lo) * q / (samples - 1);
        double d2;
        if (p.shape) {
            d2 = p.shape->d2(y);
        } else {
            const double h = 1e-4 * (p.b - p.a);
            d2 = (p.derivative_at(std::min(y + h, p.b)) - p.derivative_at(std::max(y - h, p.a))) / (2.0 * h);
        }
        m = std::max(m, std::fabs(d2));
    }
    return m;
}

Vec3 witness_direction(const PhysicalParams& params) {
    const Vec3& M = params.M_bar;
    if (M[2] != 0.0) return {M[0] / M[2], M[1] / M[2], 1.0};
    return {M[0], M[1], 1.0};
}

// Quotient of the test field with exact horizontal integrals and 1D integrals
// P (destabilizing), Q1 = ||psi'||^2, Q2 = ||psi''||^2.
double wave_quotient(int i, const Vec3& dir, const SlabDomain& domain, double P, double Q1, double Q2) {
    const TestWave w = test_wave(i, dir, domain);
    const TrigIntegrals t = trig_integrals(w.alpha, w.beta, domain);
    const double dk2 = w.dk * w.dk;
    return dk2 * P * t.sin2 / (Q2 * t.cos2 + dk2 * Q1 * t.sin2);
}

struct ProfileIntegrals {
    double P = 0.0;   // int w psi^2
    double Q1 = 0.0;  // int psi'^2
    double Q2 = 0.0;  // int psi''^2
};

// Composite Gauss-Legendre over [psi.a, psi.b].
ProfileIntegrals profile_integrals(const VerticalProfile& psi, const std::function<double(double)>& weight,
                                   int panels = 400) {
    static const GaussRule rule = gauss_legendre(16);
    ProfileIntegrals r;
    for (int p = 0; p < panels; ++p) {
        const double lo = psi.a + (psi.b - psi.a) * p / panels, hi = psi.a + (psi.b - psi.a) * (p + 1) / panels;
        r.P += integrate_gl(rule, lo, hi, [&](double s) { return weight(s) * psi.f(s) * psi.f(s); });
        r.Q1 += integrate_gl(rule, lo, hi, [&](double s) { return psi.d1(s) * psi.d1(s); });
        r.Q2 += integrate_gl(rule, lo, hi, [&](double s) { return psi.d2(s) * psi.d2(s); });
    }
    return r;
}

template <class F>
void parallel_for(int count, int threads, F&& body) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int t = 0; t < count; ++t) body(t);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mutex;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (int t = next++; t < count; t = next++) {
                try {
                    body(t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace

VerticalProfile sine_series_profile(const std::vector<double>& psi, double a, double b, int modes) {
    const int n = static_cast<int>(psi.size());
    if (n < 5) throw InvalidArgument("sine_series_profile: need at least 5 nodes");
    if (!(a < b)) throw InvalidArgument("sine_series_profile: requires a < b");
    modes = std::max(1, std::min(modes, n - 2));
    auto c = std::make_shared<std::vector<double>>(modes);
    for (int m = 1; m <= modes; ++m) {
        double s = 0.0;
        for (int k = 1; k < n - 1; ++k) s += psi[k] * std::sin(m * kPi * k / (n - 1));
        (*c)[m - 1] = 2.0 * s / (n - 1);
    }
    const double H = b - a;
    auto eval = [c, a, H](int order) {
        return [c, a, H, order](double y) {
            double s = 0.0;
            for (std::size_t m = 1; m <= c->size(); ++m) {
                const double q = m * kPi / H;
                const double x = q * (y - a);
                switch (order) {
                    case 0: s += (*c)[m - 1] * std::sin(x); break;
                    case 1: s += (*c)[m - 1] * q * std::cos(x); break;
                    default: s -= (*c)[m - 1] * q * q * std::sin(x); break;
                }
            }
            return s;
        };
    };
    return {a, b, eval(0), eval(1), eval(2)};
}

VerticalProfile smoothed_kink(double h, double l, double delta) {
    if (!(h > 0.0) || !(l > 0.0)) throw InvalidArgument("smoothed_kink: h and l must be positive");
    if (!(delta > 0.0) || delta >= std::min(h, l)) throw InvalidArgument("smoothed_kink: need 0 < delta < min(h, l)");
    const double jump = 1.0 / h + 1.0 / l;  // slope drops by this much across the blend
    VerticalProfile p;
    p.a = -l;
    p.b = h;
    p.f = [=](double s) {
        if (s <= -delta) return 1.0 + s / l;
        if (s >= delta) return 1.0 - s / h;
        const double t = (s + delta) / (2.0 * delta);
        return 1.0 + s / l - jump * 2.0 * delta * IS(t);
    };
    p.d1 = [=](double s) {
        if (s <= -delta) return 1.0 / l;
        if (s >= delta) return -1.0 / h;
        return 1.0 / l - jump * S0((s + delta) / (2.0 * delta));
    };
    p.d2 = [=](double s) {
        if (s <= -delta || s >= delta) return 0.0;
        return -jump * S1((s + delta) / (2.0 * delta)) / (2.0 * delta);
    };
    return p;
}

VerticalProfile tapered(const VerticalProfile& psi, double width) {
    if (!(width > 0.0) || 2.0 * width > psi.b - psi.a) throw InvalidArgument("tapered: invalid taper width");
    const double a = psi.a, b = psi.b, w = width;
    struct Cut {
        double v, d1, d2;
    };
    auto cut = [a, b, w](double y) {
        const double tl = std::clamp((y - a) / w, 0.0, 1.0);
        const double tr = std::clamp((b - y) / w, 0.0, 1.0);
        const double L = S0(tl), L1 = tl < 1.0 ? S1(tl) / w : 0.0, L2 = tl < 1.0 ? S2(tl) / (w * w) : 0.0;
        const double R = S0(tr), R1 = tr < 1.0 ? -S1(tr) / w : 0.0, R2 = tr < 1.0 ? S2(tr) / (w * w) : 0.0;
        return Cut{L * R, L1 * R + L * R1, L2 * R + 2.0 * L1 * R1 + L * R2};
    };
    VerticalProfile r;
    r.a = a;
    r.b = b;
    r.f = [psi, cut](double y) { return psi.f(y) * cut(y).v; };
    r.d1 = [psi, cut](double y) {
        const Cut c = cut(y);
        return psi.d1(y) * c.v + psi.f(y) * c.d1;
    };
    r.d2 = [psi, cut](double y) {
        const Cut c = cut(y);
        return psi.d2(y) * c.v + 2.0 * psi.d1(y) * c.d1 + psi.f(y) * c.d2;
    };
    return r;
}

VectorField3 build_test_field(int i, const VerticalProfile& psi, const Grid3D& grid, const Vec3& direction) {
    if (i < 0) throw InvalidArgument("build_test_field: i must be >= 0");
    const TestWave w = test_wave(i, direction, grid.domain);
    if (std::fabs(w.alpha) * grid.h1 > 2.0 * kPi / 8.0 * (1.0 + 1e-12) ||
        std::fabs(w.beta) * grid.h2 > 2.0 * kPi / 8.0 * (1.0 + 1e-12))
        throw InvalidArgument("build_test_field: phase under-resolved (fewer than 8 points per wavelength)");

    VectorField3 v(grid.size());
    v.gradient.resize(grid.size());
    const Vec3 d = w.d;
    for (int k = 0; k < grid.n3; ++k) {
        const double y3 = grid.y3(k);
        const double p0 = psi.f(y3), p1 = psi.d1(y3), p2 = psi.d2(y3);
        for (int j = 0; j < grid.n2; ++j)
            for (int ii = 0; ii < grid.n1; ++ii) {
                const std::size_t n = grid.index(ii, j, k);
                const double z = w.alpha * grid.y1(ii) + w.beta * grid.y2(j);
                const double cz = std::cos(z), sz = std::sin(z);
                v.set(n, {d[0] * p1 * cz, d[1] * p1 * cz, w.dk * p0 * sz});
                Mat3& G = v.gradient[n];
                for (int c = 0; c < 2; ++c) {
                    G(c, 0) = -d[c] * p1 * sz * w.alpha;
                    G(c, 1) = -d[c] * p1 * sz * w.beta;
                    G(c, 2) = d[c] * p2 * cz;
                }
                G(2, 0) = w.dk * p0 * cz * w.alpha;
                G(2, 1) = w.dk * p0 * cz * w.beta;
                G(2, 2) = w.dk * p1 * sz;
            }
    }
    const double scale = std::max({1.0, std::fabs(psi.f(0.5 * (psi.a + psi.b))), std::fabs(psi.d1(psi.a))});
    const double ends = std::max({std::fabs(psi.f(grid.domain.a)), std::fabs(psi.f(grid.domain.b)),
                                  std::fabs(psi.d1(grid.domain.a)), std::fabs(psi.d1(grid.domain.b))});
    v.boundary = ends <= 1e-12 * scale ? BoundaryKind::vanishing : BoundaryKind::none;
    return v;
}

VectorField3 build_test_field(int i, const std::vector<double>& psi, const Grid3D& grid, const Vec3& direction) {
    return build_test_field(i, sine_series_profile(psi, grid.domain.a, grid.domain.b), grid, direction);
}

double field_rayleigh_quotient(const VectorField3& v, const Profile1D& density, const PhysicalParams& params,
                               const Grid3D& grid, const Vec3& direction) {
    const std::vector<Mat3> g = gradient_of(v, grid);
    const double num = params.g * integrate_nodes(grid, [&](std::size_t n, int k) {
        return density.derivative_at(grid.y3(k)) * v.comp[2][n] * v.comp[2][n];
    });
    const double den = params.lambda * integrate_nodes(grid, [&](std::size_t n, int) {
        const Vec3 d = g[n] * direction;
        return dot(d, d);
    });
    return num / den;
}

// ---------------------------------------------------------------------------
// Continuous stratification
// ---------------------------------------------------------------------------

LandscapeVerdict instability_witness(const Profile1D& density, const SlabDomain& domain,
                                     const PhysicalParams& params, double eps, const LandscapeOptions& opt) {
    domain.validate();
    params.validate();
    if (!(eps >= 0.0)) throw InvalidArgument("instability_witness: eps must be nonnegative");
    const ThresholdResult thr = threshold_nmrt(density, domain, params, opt.n_threshold);
    const double M3 = params.M_bar[2];
    if (M3 != 0.0 && std::fabs(M3) >= thr.m)
        throw InvalidArgument("instability_witness: requires |M3| < m_N (m_N = " + fmt(thr.m) + ")");
    if (!(thr.gamma > 0.0)) throw WitnessNotFound("instability_witness: no destabilizing stratification");

    VerticalProfile psi = sine_series_profile(thr.psi0, domain.a, domain.b);
    if (opt.taper_width > 0.0) psi = tapered(psi, opt.taper_width * domain.height());

    const Vec3 dir = witness_direction(params);
    int i = 1;
    if (M3 != 0.0) {
        // Quotients of the tapered profile, not of psi0 itself: the taper raises ||psi''||.
        const ProfileIntegrals q =
            profile_integrals(psi, [&](double y) { return density.derivative_at(y); });
        const double target = M3 * M3 + 0.5 * (thr.m * thr.m - M3 * M3);
        const double scale = params.g / params.lambda;
        i = 0;
        for (int c = 1; c <= opt.max_i; ++c)
            if (scale * wave_quotient(c, dir, domain, q.P, q.Q1, q.Q2) > target) {
                i = c;
                break;
            }
        if (i == 0)
            throw WitnessNotFound("instability_witness: no test field with i <= " + std::to_string(opt.max_i) +
                                  " exceeds the margin; |M3| is too close to m_N");
    }

    LandscapeVerdict v;
    v.condition = Condition::instability;
    v.i = i;
    v.epsilon = eps;
    v.witness = "i=" + std::to_string(i) + " psi=threshold maximizer";
    if (eps == 0.0) return v;

    const TestWave w = test_wave(i, dir, domain);
    const Grid3D grid = make_uniform_grid(domain, points_needed(w.alpha, domain.L1, opt.n1),
                                          points_needed(w.beta, domain.L2, opt.n1), opt.n3);
    VectorField3 field = build_test_field(i, psi, grid, dir);
    field = scale_field(field, 1.0 / sup_norm(field));

    for (int halvings = 0; halvings < 60; ++halvings) {
        const EnergyReport rep = energy_report(scale_field(field, eps), density, params, grid);
        v.quadratic_part = 0.5 * (rep.V_M - rep.V_grho);
        v.cubic_part = -rep.N_grho;
        v.functional_value = rep.delta_EP;
        v.epsilon = eps;
        if (std::fabs(v.quadratic_part) >= opt.dominance * std::fabs(v.cubic_part)) break;
        eps *= 0.5;
    }
    v.witness += " eps=" + fmt(v.epsilon);
    v.satisfied = v.functional_value < 0.0;
    return v;
}

std::vector<LandscapeVerdict> stability_certificate(const Profile1D& density, const SlabDomain& domain,
                                                    const PhysicalParams& params, int trials, double eps_max,
                                                    std::uint64_t seed, const LandscapeOptions& opt) {
    domain.validate();
    params.validate();
    if (trials < 1) throw InvalidArgument("stability_certificate: trials must be >= 1");
    if (!(eps_max > 0.0)) throw InvalidArgument("stability_certificate: eps_max must be positive");
    const ThresholdResult thr = threshold_nmrt(density, domain, params, opt.n_threshold);
    const double M3 = params.M_bar[2];
    if (!(std::fabs(M3) > thr.m))
        throw InvalidArgument("stability_certificate: requires |M3| > m_N (m_N = " + fmt(thr.m) + ")");

    const double H = domain.height();
    const double c = 0.5 * params.g * max_second_derivative(density, domain.a, domain.b);
    double eps = eps_max;
    if (c > 0.0)
        eps = std::min(eps_max, 0.5 * (M3 * M3 - thr.m * thr.m) * params.lambda * kPi * kPi / (2.0 * c * H * H));

    const Grid3D grid = make_uniform_grid(domain, opt.grid_h, opt.grid_h, opt.n3);
    std::vector<LandscapeVerdict> out(trials);
    parallel_for(trials, opt.threads, [&](int t) {
        const SolenoidalField w = random_solenoidal(domain, seed + t, opt.random);
        VectorField3 f = sample_field(grid, w.as_function(), BoundaryKind::vanishing);
        f.hessian.clear();
        const double s = sup_norm(f);
        LandscapeVerdict& v = out[t];
        v.condition = Condition::stability;
        v.seed = seed + static_cast<std::uint64_t>(t);
        v.epsilon = eps;
        v.witness = "random field seed=" + std::to_string(v.seed);
        if (s == 0.0) return;
        const EnergyReport rep = energy_report(scale_field(f, eps / s), density, params, grid);
        v.quadratic_part = 0.5 * (rep.V_M - rep.V_grho);
        v.cubic_part = -rep.N_grho;
        v.functional_value = rep.delta_EP;
        v.satisfied = v.functional_value > 0.0;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Two-layer stratification
// ---------------------------------------------------------------------------

namespace {

int interface_layers(double h, double l, int n3_min) {
    for (int N = std::max(8, n3_min - 1); N <= 4096; ++N) {
        const double x = l * N / (h + l);
        if (std::fabs(x - std::round(x)) < 1e-9) return N + 1;
    }
    throw InvalidArgument("stratified_landscape: the interface cannot be placed on a grid node");
}

}  // namespace

std::vector<LandscapeVerdict> stratified_landscape(const PhysicalParams& params, double h, double l,
                                                   double rho_plus, double rho_minus, double eps,
                                                   Condition condition, int trials, std::uint64_t seed,
                                                   const LandscapeOptions& opt) {
    params.validate();
    const ThresholdResult thr = threshold_stratified(rho_plus, rho_minus, h, l, params);
    const double mS = thr.m;
    const double jump = rho_plus - rho_minus;
    const double M3 = params.M_bar[2];
    if (!(eps >= 0.0)) throw InvalidArgument("stratified_landscape: eps must be nonnegative");

    SlabDomain domain;
    domain.a = -l;
    domain.b = h;
    domain.interface = 0.0;
    const int n3 = interface_layers(h, l, opt.n3);

    std::vector<LandscapeVerdict> out;
    if (condition == Condition::instability) {
        if (!(jump > 0.0)) throw WitnessNotFound("stratified_landscape: stable stratification has no witness");
        if (M3 != 0.0 && std::fabs(M3) >= mS)
            throw InvalidArgument("stratified_landscape: instability requires |M3| < m_S (m_S = " + fmt(mS) + ")");

        VerticalProfile psi = smoothed_kink(h, l, std::min(h, l) / 10.0);
        if (opt.taper_width > 0.0) psi = tapered(psi, opt.taper_width * (h + l));
        const Vec3 dir = witness_direction(params);
        int i = 1;
        if (M3 != 0.0) {
            ProfileIntegrals q = profile_integrals(psi, [](double) { return 0.0; });
            q.P = psi.f(0.0) * psi.f(0.0);
            const double target = M3 * M3 + 0.5 * (mS * mS - M3 * M3);
            const double scale = params.g * jump / params.lambda;
            i = 0;
            for (int c = 1; c <= opt.max_i; ++c)
                if (scale * wave_quotient(c, dir, domain, q.P, q.Q1, q.Q2) > target) {
                    i = c;
                    break;
                }
            if (i == 0)
                throw WitnessNotFound("stratified_landscape: no test field with i <= " + std::to_string(opt.max_i) +
                                      " exceeds the margin");
        }

        LandscapeVerdict v;
        v.condition = Condition::instability;
        v.i = i;
        v.epsilon = eps;
        v.witness = "i=" + std::to_string(i) + " psi=smoothed two-layer maximizer";
        if (eps > 0.0) {
            const TestWave w = test_wave(i, dir, domain);
            const Grid3D grid = make_uniform_grid(domain, points_needed(w.alpha, domain.L1, opt.n1),
                                                  points_needed(w.beta, domain.L2, opt.n1), n3);
            VectorField3 field = build_test_field(i, psi, grid, dir);
            field = scale_field(field, 1.0 / sup_norm(field));
            for (int halvings = 0; halvings < 60; ++halvings) {
                const VectorField3 e = scale_field(field, eps);
                const MagneticVariation mv = magnetic_energy_variation(e, params, grid);
                const StratifiedFunctionals sf = stratified_surface_functionals(e, grid, rho_plus, rho_minus, params);
                v.quadratic_part = 0.5 * (mv.V_M - sf.V_jump);
                v.cubic_part = -sf.N_jump;
                v.functional_value = v.quadratic_part + v.cubic_part;
                v.epsilon = eps;
                if (std::fabs(v.quadratic_part) >= opt.dominance * std::fabs(v.cubic_part)) break;
                eps *= 0.5;
            }
            v.witness += " eps=" + fmt(v.epsilon);
            v.satisfied = v.functional_value < 0.0;
        }
        out.push_back(v);
        return out;
    }

    if (trials < 1) throw InvalidArgument("stratified_landscape: trials must be >= 1");
    if (jump > 0.0 && !(std::fabs(M3) > mS))
        throw InvalidArgument("stratified_landscape: stability requires |M3| > m_S (m_S = " + fmt(mS) + ")");
    // |N_jump| <= F (1 + F) |V_jump|; keep F (1 + F) below a quarter of the quadratic margin.
    const double B = jump > 0.0 ? 0.25 * (M3 * M3 - mS * mS) / (mS * mS) : 0.25;
    const double F_allowed = 0.5 * (std::sqrt(1.0 + 4.0 * B) - 1.0);
    const Grid3D grid = make_uniform_grid(domain, opt.grid_h, opt.grid_h, n3);
    out.resize(trials);
    parallel_for(trials, opt.threads, [&](int t) {
        const SolenoidalField w = random_solenoidal(domain, seed + t, opt.random);
        VectorField3 f = sample_field(grid, w.as_function(), BoundaryKind::vanishing);
        f.hessian.clear();
        LandscapeVerdict& v = out[t];
        v.condition = Condition::stability;
        v.seed = seed + static_cast<std::uint64_t>(t);
        v.witness = "random field seed=" + std::to_string(v.seed);
        const double s = sup_norm(f);
        if (s == 0.0) return;
        const double F1 = stratified_surface_functionals(scale_field(f, 1.0 / s), grid, rho_plus, rho_minus, params)
                              .grad_h_sup;
        double e = eps;
        if (F1 > 0.0) e = std::min(e, F_allowed / F1);
        v.epsilon = e;
        const VectorField3 x = scale_field(f, e / s);
        const MagneticVariation mv = magnetic_energy_variation(x, params, grid);
        const StratifiedFunctionals sf = stratified_surface_functionals(x, grid, rho_plus, rho_minus, params);
        v.quadratic_part = 0.5 * (mv.V_M - sf.V_jump);
        v.cubic_part = -sf.N_jump;
        v.functional_value = v.quadratic_part + v.cubic_part;
        v.satisfied = v.functional_value > 0.0;
    });
    return out;
}

}  // namespace mhdi
