// One pass/fail line per acceptance criterion. Exit status is the number of failures.

#include "mhd_inhibit/cli/run.hpp"
#include "mhd_inhibit/dynamics.hpp"
#include "mhd_inhibit/energy.hpp"
#include "mhd_inhibit/landscape.hpp"
#include "mhd_inhibit/random_fields.hpp"
#include "mhd_inhibit/threshold.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>

using namespace mhdi;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

const SlabDomain kSlab{0.0, pi, 1.0, 1.0};

Profile1D constant_gradient() {
    return make_profile(ProfileShape::linear(1.0, 1.0), ProfileKind::density, 0.0, pi, 257);
}

PhysicalParams vertical(double M3, double mu = 0.0) {
    PhysicalParams p;
    p.M_bar = {0.0, 0.0, M3};
    p.mu = mu;
    return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Analytic-mode flow maps shared by the flux and kinematic criteria.
std::vector<FlowMap>& flow_corpus() {
    static std::vector<FlowMap> maps = [] {
        std::vector<FlowMap> m;
        const Grid3D g = make_uniform_grid(kSlab, 8, 8, 9);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto w = std::make_shared<SolenoidalField>(random_solenoidal(kSlab, 1000 + seed, {6, 2, 2, 0.3}));
            m.push_back(flow_from_divfree_field(w, g, 1.0, 128));
        }
        return m;
    }();
    return maps;
}

Outcome ac01() {
    const auto t0 = std::chrono::steady_clock::now();
    const ThresholdResult r = threshold_nmrt(constant_gradient(), kSlab, PhysicalParams{}, 2001);
    const double dt = seconds_since(t0);
    const double err = std::fabs(r.m - 1.0);
    return {err <= 1e-4 && dt < 1.0, "m_N=" + fmt("%.12f", r.m) + " rel.err=" + fmt("%.2e", err) +
                                         " time=" + fmt("%.3f", dt) + "s"};
}

Outcome ac02() {
    std::vector<double> err;
    for (int n : {250, 500, 1000, 2000})
        err.push_back(std::fabs(threshold_nmrt(constant_gradient(), kSlab, PhysicalParams{}, n).m - 1.0));
    bool ok = true;
    std::string d = "ratios:";
    for (int i = 0; i < 3; ++i) {
        const double q = err[i] / err[i + 1];
        ok = ok && q >= 3.5 && q <= 4.5;
        d += " " + fmt("%.4f", q);
    }
    return {ok, d};
}

Outcome ac03() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0.1, 10.0);
    PhysicalParams p;
    p.g = 9.81;
    p.lambda = 0.7;
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const double h = U(rng), l = U(rng), rm = U(rng), jump = U(rng);
        const double closed = (p.g * jump / p.lambda) / (1.0 / h + 1.0 / l);
        const double q = stratified_maximizer_quotient(rm + jump, rm, h, l, p);
        worst = std::max(worst, std::fabs(q - closed) / closed);
    }
    return {worst <= 1e-12, "max rel.err=" + fmt("%.2e", worst) + " over 10 triples"};
}

Outcome ac04() {
    const int n = 2001;
    const ThresholdResult r = threshold_nmrt(constant_gradient(), kSlab, PhysicalParams{}, n);
    const std::vector<double> w(n, 1.0);
    double prev = -1.0;
    bool mono = true;
    std::string d;
    double q = 0.0;
    for (int i : {4, 8, 16, 32, 64}) {
        q = test_sequence_quotient(i, r.psi0, w, kSlab, PhysicalParams{});
        mono = mono && q > prev;
        prev = q;
        d += " q" + std::to_string(i) + "=" + fmt("%.6f", q);
    }
    const double target = r.gamma;  // g = lambda = 1
    const double gap = std::fabs(q - target) / target;
    return {mono && gap <= 0.02, "gamma=" + fmt("%.6f", target) + d + " gap64=" + fmt("%.2e", gap)};
}

Outcome ac05() {
    const double mu = 0.1;
    ModeSpec tmpl;
    tmpl.rho_bar = 1.0;
    tmpl.rho_prime = 1.0;
    tmpl.h = pi;
    tmpl.params = vertical(0.0, mu);
    const double mN = tmpl.h / pi * std::sqrt(tmpl.params.g * tmpl.rho_prime / tmpl.params.lambda);
    const std::vector<double> M3{0.99 * mN, 1.01 * mN};
    const int n_max = 32;
    const auto rows = stability_boundary_scan(tmpl, M3, n_max);
    const bool signs = rows[0].growth_rate > 0.0 && rows[1].growth_rate < 0.0;

    // Rates against eigenvalues of the companion matrix of each mode.
    double rate_err = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double best = -1e300;
        for (int n = 1; n <= n_max; ++n) {
            ModeSpec s = tmpl;
            s.n = n;
            s.params.M_bar[2] = M3[r];
            Eigen::Matrix2d C;
            C << 0.0, 1.0, -s.stiffness(), -s.nu();
            const Eigen::Vector2cd ev = C.eigenvalues();
            best = std::max({best, ev[0].real(), ev[1].real()});
        }
        rate_err = std::max(rate_err, std::fabs(rows[r].growth_rate - best));
    }

    double traj = 0.0;
    for (double m3 : M3) {
        ModeSpec s = tmpl;
        s.params.M_bar[2] = m3;
        const ModeState init{1.0, 0.0, 0.0};
        traj = std::max(traj, trajectory_error(simulate_mode(s, init, 20.0, 1e-3), s, init));
    }
    return {signs && rate_err <= 1e-8 && traj <= 1e-6,
            "rates " + fmt("%+.3e", rows[0].growth_rate) + " " + fmt("%+.3e", rows[1].growth_rate) +
                " rate err=" + fmt("%.1e", rate_err) + " trajectory err=" + fmt("%.1e", traj)};
}

Outcome ac06() {
    PhysicalParams p;
    p.M_bar = {0.3, -0.2, 1.0};
    const Vec3 c{0.1, -0.2, pi / 2};
    const std::vector<ParamSurface> patches{axis_patch(c, 0, 1.0), axis_patch(c, 1, 1.0), axis_patch(c, 2, 1.0)};
    double diff = 0.0, point = 0.0;
    for (const FlowMap& m : flow_corpus()) {
        const FluxReport r = verify_flux_equivalence(m, p, patches);
        diff = std::max(diff, r.max_difference);
        point = std::max(point, r.pointwise_residual);
    }
    return {diff <= 1e-6 && point <= 1e-8, std::to_string(flow_corpus().size()) + " maps x 3 patches, max flux diff=" +
                                               fmt("%.2e", diff) + " pointwise=" + fmt("%.2e", point)};
}

Outcome ac07() {
    double piola = 0.0, kron = 0.0;
    std::size_t count = 0;
    for (const FlowMap& m : flow_corpus()) {
        piola = std::max(piola, piola_residual(m));
        kron = std::max(kron, kronecker_residual(m));
        ++count;
    }
    // A compressible map with curvature: zeta3 = y3 + 0.3 sin y1 sin y3.
    FieldFunction f;
    f.value = [](const Vec3& y) { return Vec3{0.0, 0.0, 0.3 * std::sin(y[0]) * std::sin(y[2])}; };
    f.gradient = [](const Vec3& y) {
        Mat3 g{};
        g(2, 0) = 0.3 * std::cos(y[0]) * std::sin(y[2]);
        g(2, 2) = 0.3 * std::sin(y[0]) * std::cos(y[2]);
        return g;
    };
    f.hessian = [](const Vec3& y) {
        Hessian3 h{};
        h[2](0, 0) = h[2](2, 2) = -0.3 * std::sin(y[0]) * std::sin(y[2]);
        h[2](0, 2) = h[2](2, 0) = 0.3 * std::cos(y[0]) * std::cos(y[2]);
        return h;
    };
    const FlowMap b = build_flow_map(std::make_shared<DisplacementMap>(f), make_uniform_grid(kSlab, 8, 8, 9));
    piola = std::max(piola, piola_residual(b));
    kron = std::max(kron, kronecker_residual(b));
    ++count;
    return {piola <= 1e-8 && kron <= 1e-8, std::to_string(count) + " maps, Piola=" + fmt("%.2e", piola) +
                                               " Kronecker=" + fmt("%.2e", kron)};
}

Outcome ac08() {
    const Grid3D g = make_uniform_grid(kSlab, 33, 33, 65);
    const Profile1D rho =
        make_profile(ProfileShape::exponential(0.5, 1.0, 0.4), ProfileKind::density, -0.5, pi + 0.5, 513);
    const Profile1D lin = make_profile(ProfileShape::linear(1.0, 0.8), ProfileKind::density, -0.5, pi + 0.5, 513);
    double worst = 0.0, cubic = 0.0, jdef = 0.0;
    for (std::uint64_t seed : {31u, 32u}) {
        auto w = std::make_shared<SolenoidalField>(random_solenoidal(kSlab, seed, {6, 2, 2, 0.3}));
        const FlowMap m = flow_from_divfree_field(w, g, 1.0, 64);
        const PotentialVariation pv = potential_variation_exact(m, rho, PhysicalParams{});
        worst = std::max(worst, std::fabs(-pv.V_star - pv.delta_direct) / std::fabs(pv.delta_direct));
        jdef = std::max(jdef, pv.max_jacobian_defect);
        cubic = std::max(cubic, std::fabs(cubic_remainder(m.eta, lin, PhysicalParams{}, g)));
    }
    return {worst <= 1e-4 && cubic <= 1e-12, "identity rel.err=" + fmt("%.2e", worst) + " |J-1|max=" +
                                                 fmt("%.1e", jdef) + " cubic(const rho')=" + fmt("%.1e", cubic)};
}

Outcome ac09() {
    const SlabDomain d{0.0, 1.0, 1.0, 1.0};
    const Grid3D g = make_uniform_grid(d, 4, 4, 65);
    const Profile1D rho = make_profile(ProfileShape::exponential(0.0, 1.0, 1.0), ProfileKind::density, -1, 2, 301);
    const double A = 0.1;
    std::vector<double> ratio;
    for (double eps : {1.0 / 8, 1.0 / 16}) {
        FieldFunction f{[&](const Vec3& y) { return Vec3{0.0, 0.0, eps * A * std::sin(pi * y[2])}; }, {}, {}};
        ratio.push_back(cubic_remainder(sample_field(g, f), rho, PhysicalParams{}, g) / (eps * eps * eps));
    }
    const double change = std::fabs(ratio[1] - ratio[0]) / std::fabs(ratio[1]);
    return {change <= 0.01, "N/eps^3 = " + fmt("%.8e", ratio[0]) + ", " + fmt("%.8e", ratio[1]) +
                                " change=" + fmt("%.2e", change)};
}

Outcome ac10() {
    double worst = 0.0;
    for (double mu : {0.0, 0.1}) {
        ModeSpec s;
        s.rho_bar = 1.0;
        s.rho_prime = 1.0;
        s.h = pi;
        s.params = vertical(1.5, mu);
        worst = std::max(worst, energy_audit(simulate_mode(s, {1.0, 0.5, 0.0}, 20.0, 1e-3), s).max_residual);
    }
    return {worst <= 1e-6, "max audit residual=" + fmt("%.2e", worst)};
}

Outcome ac11() {
    const Profile1D rho = constant_gradient();
    const double mN = threshold_nmrt(rho, kSlab, PhysicalParams{}, 1001).m;
    const LandscapeVerdict w = instability_witness(rho, kSlab, vertical(0.5), 1e-2);
    const double margin = std::fabs(w.quadratic_part) / std::max(std::fabs(w.cubic_part), 1e-300);
    const bool witness = w.functional_value < 0.0 && margin >= 10.0;

    LandscapeOptions opt;
    opt.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const auto cert = stability_certificate(rho, kSlab, vertical(2.0), 200, 0.05, 0, opt);
    int positive = 0;
    double least = 1e300;
    for (const auto& v : cert) {
        positive += v.functional_value > 0.0 ? 1 : 0;
        least = std::min(least, v.functional_value);
    }

    int horizontal = 0;
    for (double B : {0.1, 1.0, 10.0}) {
        PhysicalParams p;
        p.M_bar = {B, 0.0, 0.0};
        horizontal += instability_witness(rho, kSlab, p, 1e-2).functional_value < 0.0 ? 1 : 0;
    }
    return {witness && positive == 200 && horizontal == 3,
            "m_N=" + fmt("%.6f", mN) + " witness dEP=" + fmt("%.3e", w.functional_value) + " (quadratic " +
                fmt("%.3e", w.quadratic_part) + ", cubic " + fmt("%.3e", w.cubic_part) + "); certificate " + std::to_string(positive) + "/200 positive (min " +
                fmt("%.3e", least) + "); horizontal witnesses " + std::to_string(horizontal) + "/3"};
}

Outcome ac12() {
    const SlabDomain d{0.0, 2.0, 1.0, 1.0};
    const Grid3D g = make_uniform_grid(d, 8, 8, 17);
    std::mt19937_64 rng(77);
    int holds = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const SolenoidalField w = random_solenoidal(d, 5000 + seed);
        const Vec3 n{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), 1.0};
        PhysicalParams p;
        p.lambda = uniform(rng, 0.1, 10.0);
        FieldFunction f = w.as_function();
        f.hessian = nullptr;
        holds += poincare_check(sample_field(g, f, BoundaryKind::vanishing), n, p, g).holds ? 1 : 0;
    }
    FieldFunction e;
    e.value = [](const Vec3& y) { return Vec3{std::sin(pi * y[2] / 2.0), 0.0, 0.0}; };
    e.gradient = [](const Vec3& y) {
        Mat3 m{};
        m(0, 2) = pi / 2.0 * std::cos(pi * y[2] / 2.0);
        return m;
    };
    const PoincareCheck eq = poincare_check(sample_field(g, e, BoundaryKind::vanishing), {0, 0, 1}, PhysicalParams{}, g);
    const double gap = std::fabs(eq.lhs - eq.rhs) / eq.rhs;
    return {holds == 1000 && gap <= 1e-10,
            std::to_string(holds) + "/1000 random fields; equality case rel.gap=" + fmt("%.1e", gap)};
}

Outcome ac13() {
    PhysicalParams p;
    p.alpha_beta = 0.3;
    const SlabDomain d{0.0, 2.0};
    const ProfileShape rs = ProfileShape::sinusoidal(2.0, 0.6, 2.1, 0.3);
    // Theta = -rho / alpha_beta, so Theta' = -rho' / alpha_beta.
    const ProfileShape ts = ProfileShape::sinusoidal(-2.0 / 0.3, -0.6 / 0.3, 2.1, 0.3);
    const double a = threshold_nmrt(make_profile(rs, ProfileKind::density, 0, 2, 401), d, p, 1001).m;
    const double b = threshold_benard(make_profile(ts, ProfileKind::temperature, 0, 2, 401), d, p, 1001).m;
    const double rel = std::fabs(a - b) / a;
    return {rel <= 1e-12, "m_N=" + fmt("%.15f", a) + " m_B=" + fmt("%.15f", b) + " rel=" + fmt("%.1e", rel)};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome ac14() {
    namespace fs = std::filesystem;
    const Json configs[] = {
        Json::parse(R"({"command": "landscape", "params": {"M_bar": [0.0, 0.0, 2.0]},
            "domain": {"a": 0.0, "b": 3.141592653589793},
            "profile": {"form": "linear", "coefficients": [1.0, 1.0]},
            "landscape": {"condition": "stability", "trials": 8}, "seed": 99})"),
        Json::parse(R"({"command": "flux-audit", "domain": {"a": 0.0, "b": 3.141592653589793},
            "resolution": {"n1": 4, "n2": 4, "n3": 9}, "flux": {"maps": 2, "steps": 32}, "seed": 5})"),
        Json::parse(R"({"command": "threshold", "domain": {"a": 0.0, "b": 3.141592653589793},
            "profile": {"form": "linear", "coefficients": [1.0, 1.0]}})")};
    const fs::path root = fs::temp_directory_path() / "mhdi_acceptance_determinism";
    int same = 0, total = 0;
    for (const Json& j : configs) {
        const cli::RunConfig c = cli::parse_config_json(j, ".");
        std::string out[2];
        for (int rep = 0; rep < 2; ++rep) {
            cli::RunOptions o;
            o.quiet = true;
            o.threads = rep == 0 ? 1 : 4;
            o.out = (root / std::to_string(rep)).string();
            fs::remove_all(*o.out);
            cli::run(c, o);
            out[rep] = slurp(fs::path(*o.out) / "result.json");
        }
        ++total;
        same += (!out[0].empty() && out[0] == out[1]) ? 1 : 0;
    }
    fs::remove_all(root);
    return {same == total, std::to_string(same) + "/" + std::to_string(total) + " commands byte-identical"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"AC01 closed-form threshold m_N = 1 at n = 2001", ac01},
        {"AC02 second-order convergence of the threshold", ac02},
        {"AC03 stratified threshold from the piecewise-linear maximizer", ac03},
        {"AC04 test-sequence quotients saturate the 1D threshold", ac04},
        {"AC05 growth-rate sign change at m_N", ac05},
        {"AC06 flux conservation on random volume-preserving flows", ac06},
        {"AC07 Piola and Kronecker identities", ac07},
        {"AC08 potential-energy identity", ac08},
        {"AC09 cubic remainder scaling", ac09},
        {"AC10 mode energy law", ac10},
        {"AC11 energy landscape on both sides of the threshold", ac11},
        {"AC12 Poincare bound", ac12},
        {"AC13 Benard reduction", ac13},
        {"AC14 deterministic result.json", ac14},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("[%s] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
