#include "mhd_inhibit/cli/run.hpp"

#include "mhd_inhibit/dynamics.hpp"
#include "mhd_inhibit/field_io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace mhdi::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kFluxTol = 1e-6;
constexpr double kPointwiseTol = 1e-8;
constexpr double kIdentityTol = 1e-4;

Json vec_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

Json params_json(const PhysicalParams& p) {
    return {{"g", p.g}, {"lambda", p.lambda}, {"mu", p.mu}, {"M_bar", vec_json(p.M_bar)}, {"alpha_beta", p.alpha_beta}};
}

Json domain_json(const SlabDomain& d) {
    Json j{{"a", d.a}, {"b", d.b}, {"L1", d.L1}, {"L2", d.L2}};
    j["interface"] = d.interface ? Json(*d.interface) : Json(nullptr);
    return j;
}

std::string csv_line(std::initializer_list<double> xs) {
    std::string s;
    bool first = true;
    for (double x : xs) {
        if (!first) s += ',';
        first = false;
        s += format_double(x);
    }
    return s + '\n';
}

const char* condition_name(Condition c) { return c == Condition::stability ? "stability" : "instability"; }

Json verdict_json(const LandscapeVerdict& v) {
    return {{"condition", condition_name(v.condition)},
            {"satisfied", v.satisfied},
            {"delta_EP", v.functional_value},
            {"quadratic_part", v.quadratic_part},
            {"cubic_part", v.cubic_part},
            {"epsilon", v.epsilon},
            {"i", v.i},
            {"seed", v.seed},
            {"witness", v.witness}};
}

// Constant weight slope of a linear closed-form profile, if any.
std::optional<double> linear_slope(const Profile1D& p) {
    if (!p.shape || p.shape->form != ProfileShape::Form::linear) return std::nullopt;
    return p.shape->d1(0.0);
}

Json threshold_json(const ThresholdResult& r, double tol) {
    Json j{{"m", r.m},
           {"gamma", r.gamma},
           {"a", r.a},
           {"b", r.b},
           {"n_grid", r.n_grid},
           {"tol", tol},
           {"converged", r.converged},
           {"bisection_steps", r.bisection_steps},
           {"residual", r.residual}};
    j["richardson_estimate"] = r.richardson_estimate ? Json(*r.richardson_estimate) : Json(nullptr);
    return j;
}

RunOutcome cmd_threshold(const RunConfig& c) {
    RunOutcome out;
    const ThresholdSpec& t = c.threshold;
    ThresholdResult r;
    std::optional<double> closed;
    Json extra;
    if (t.variant == "stratified") {
        r = threshold_stratified(t.rho_plus, t.rho_minus, t.h, t.l, c.params, c.resolution.n);
        const double jump = t.rho_plus - t.rho_minus;
        if (jump > 0.0) closed = std::sqrt((c.params.g * jump / c.params.lambda) / (1.0 / t.h + 1.0 / t.l));
        extra = {{"rho_plus", t.rho_plus}, {"rho_minus", t.rho_minus}, {"h", t.h}, {"l", t.l}};
    } else {
        const Profile1D prof = c.profile->build(c.domain);
        const ThresholdOptions opt{c.tol, true};
        double weight_slope = 0.0;
        if (t.variant == "nmrt") {
            r = threshold_nmrt(prof, c.domain, c.params, c.resolution.n, opt);
            if (auto s = linear_slope(prof)) weight_slope = *s;
        } else {
            r = threshold_benard(prof, c.domain, c.params, c.resolution.n, opt);
            if (auto s = linear_slope(prof)) weight_slope = -c.params.alpha_beta * *s;
        }
        if (weight_slope > 0.0)
            closed = c.domain.height() / std::numbers::pi * std::sqrt(c.params.g * weight_slope / c.params.lambda);
    }
    out.result = {{"command", "threshold"}, {"variant", t.variant}};
    out.result["threshold"] = threshold_json(r, c.tol);
    if (!extra.is_null()) out.result["stratification"] = extra;
    if (closed) {
        out.result["closed_form_m"] = *closed;
        out.result["relative_error"] = std::fabs(r.m - *closed) / *closed;
    }
    std::string csv = "y,psi\n";
    const int n = static_cast<int>(r.psi0.size());
    for (int i = 0; i < n; ++i) csv += csv_line({r.a + (r.b - r.a) * i / (n - 1), r.psi0[i]});
    out.files.emplace_back("psi0.csv", std::move(csv));
    return out;
}

ModeSpec mode_spec(const RunConfig& c, double rho_bar, double rho_prime, int n) {
    ModeSpec s;
    s.n = n;
    s.rho_bar = rho_bar;
    s.rho_prime = rho_prime;
    s.params = c.params;
    s.h = c.domain.height();
    s.validate();
    return s;
}

Json roots_json(const ModeSpec& s) {
    const auto r = characteristic_roots(s);
    return Json::array({Json::array({r[0].real(), r[0].imag()}), Json::array({r[1].real(), r[1].imag()})});
}

RunOutcome cmd_mode_sim(const RunConfig& c) {
    RunOutcome out;
    const ModeSimSpec& m = c.mode;
    const ModeSpec spec = mode_spec(c, m.rho_bar, m.rho_prime, m.n);
    const ModeState init{m.eta0, m.eta_dot0, 0.0};
    const auto series = simulate_mode(spec, init, m.T, m.dt);
    const EnergyAuditReport audit = energy_audit(series, spec);
    out.result = {{"command", "mode-sim"},
                  {"n", m.n},
                  {"k", spec.k()},
                  {"nu", spec.nu()},
                  {"alfven_speed_sq", spec.alfven_speed_sq()},
                  {"stiffness", spec.stiffness()},
                  {"characteristic_roots", roots_json(spec)},
                  {"growth_rate", growth_rate(spec)},
                  {"T", m.T},
                  {"dt", m.dt},
                  {"steps", static_cast<int>(series.size()) - 1},
                  {"trajectory_error", trajectory_error(series, spec, init)},
                  {"energy_audit",
                   {{"max_residual", audit.max_residual},
                    {"E0", audit.E0},
                    {"E_final", audit.E_final},
                    {"dissipated", audit.dissipated}}}};
    std::string csv = "t,eta,eta_dot,E\n";
    for (const auto& s : series) csv += csv_line({s.t, s.eta, s.eta_dot, s.E});
    out.files.emplace_back("series.csv", std::move(csv));
    return out;
}

RunOutcome cmd_boundary_scan(const RunConfig& c) {
    RunOutcome out;
    const ScanSpec& sc = c.scan;
    const ModeSpec tmpl = mode_spec(c, sc.rho_bar, sc.rho_prime, 1);
    const double mN = c.domain.height() / std::numbers::pi * std::sqrt(c.params.g * sc.rho_prime / c.params.lambda);
    std::vector<double> M3 = sc.M3_values;
    for (double f : sc.M3_factors) M3.push_back(f * mN);
    if (M3.empty()) throw ConfigError("scan: give M3_values or M3_factors");
    const auto rows = stability_boundary_scan(tmpl, M3, sc.n_max);
    Json jr = Json::array();
    std::string csv = "M3,growth_rate,argmax_n\n";
    for (const auto& r : rows) {
        jr.push_back({{"M3", r.M3}, {"growth_rate", r.growth_rate}, {"argmax_n", r.argmax_n}});
        csv += format_double(r.M3) + "," + format_double(r.growth_rate) + "," + std::to_string(r.argmax_n) + "\n";
    }
    out.result = {{"command", "boundary-scan"}, {"m_N", mN}, {"n_max", sc.n_max}, {"rows", jr}};
    out.files.emplace_back("scan.csv", std::move(csv));
    return out;
}

RunOutcome cmd_landscape(const RunConfig& c, int threads) {
    RunOutcome out;
    const LandscapeSpec& L = c.landscape;
    LandscapeOptions opt;
    opt.n_threshold = c.resolution.n;
    opt.threads = threads;
    std::vector<LandscapeVerdict> verdicts;
    Json meta{{"n_threshold", opt.n_threshold}, {"n1", opt.n1}, {"n3", opt.n3}, {"max_i", opt.max_i},
              {"dominance", opt.dominance}, {"taper_width", opt.taper_width}, {"grid_h", opt.grid_h}};
    std::optional<std::string> failure;
    try {
        if (L.variant == "stratified") {
            verdicts = stratified_landscape(c.params, L.h, L.l, L.rho_plus, L.rho_minus,
                                            L.condition == Condition::stability ? L.eps_max : L.eps, L.condition,
                                            L.trials, c.seed, opt);
        } else {
            const Profile1D prof = c.profile->build(c.domain);
            if (L.condition == Condition::instability)
                verdicts.push_back(instability_witness(prof, c.domain, c.params, L.eps, opt));
            else
                verdicts = stability_certificate(prof, c.domain, c.params, L.trials, L.eps_max, c.seed, opt);
        }
    } catch (const WitnessNotFound& e) {
        failure = e.what();
    }
    int satisfied = 0;
    std::string lines;
    for (const auto& v : verdicts) {
        satisfied += v.satisfied ? 1 : 0;
        lines += to_json_line(verdict_json(v)) + "\n";
    }
    out.verdict_ok = !failure && satisfied == static_cast<int>(verdicts.size());
    out.result = {{"command", "landscape"},
                  {"variant", L.variant},
                  {"condition", condition_name(L.condition)},
                  {"seed", c.seed},
                  {"tested", verdicts.size()},
                  {"satisfied", satisfied},
                  {"all_satisfied", out.verdict_ok},
                  {"options", meta}};
    if (failure) out.result["error"] = *failure;
    if (L.condition == Condition::instability && !verdicts.empty())
        out.result["witness"] = verdict_json(verdicts.front());
    out.files.emplace_back("verdicts.jsonl", std::move(lines));
    return out;
}

std::shared_ptr<const LagrangianMap> shear_map(double s, const SlabDomain& d) {
    FieldFunction f;
    f.value = [s, d](const Vec3& y) { return Vec3{s * (y[2] - d.a), 0.0, 0.0}; };
    f.gradient = [s](const Vec3&) {
        Mat3 g{};
        g(0, 2) = s;
        return g;
    };
    f.hessian = [](const Vec3&) { return Hessian3{}; };
    return std::make_shared<DisplacementMap>(f);
}

RunOutcome cmd_flux_audit(const RunConfig& c) {
    RunOutcome out;
    const FluxSpec& f = c.flux;
    const Grid3D grid = make_uniform_grid(c.domain, c.resolution.n1, c.resolution.n2, c.resolution.n3);
    const Vec3 centre{0.0, 0.0, 0.5 * (c.domain.a + c.domain.b)};
    std::vector<ParamSurface> surfaces;
    for (int axis = 0; axis < 3; ++axis) {
        surfaces.push_back(axis_patch(centre, axis, f.patch_side));
        surfaces.back().quad = f.quad;
    }
    Json maps = Json::array();
    double worst_diff = 0.0, worst_point = 0.0;
    std::string csv = "map,surface,initial,transported,difference\n";
    for (int t = 0; t < f.maps; ++t) {
        FlowMap map;
        const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(t);
        if (f.map == "identity") {
            map = build_flow_map(std::make_shared<IdentityMap>(), grid);
        } else if (f.map == "shear") {
            map = build_flow_map(shear_map(f.shear, c.domain), grid);
        } else {
            RandomFieldSpec rs;
            rs.amplitude = f.amplitude;
            auto w = std::make_shared<SolenoidalField>(random_solenoidal(c.domain, seed, rs));
            map = flow_from_divfree_field(w, grid, f.T, f.steps);
        }
        const FluxReport rep = verify_flux_equivalence(map, c.params, surfaces);
        double jdef = 0.0;
        for (double J : map.jacobian.values) jdef = std::max(jdef, std::fabs(J - 1.0));
        Json js = Json::array();
        for (std::size_t s = 0; s < rep.surfaces.size(); ++s) {
            const auto& r = rep.surfaces[s];
            js.push_back({{"axis", s}, {"initial", r.initial}, {"transported", r.transported},
                          {"difference", r.difference}, {"converse", r.converse}});
            csv += std::to_string(t) + "," + std::to_string(s) + "," + format_double(r.initial) + "," +
                   format_double(r.transported) + "," + format_double(r.difference) + "\n";
        }
        worst_diff = std::max(worst_diff, rep.max_difference);
        worst_point = std::max(worst_point, rep.pointwise_residual);
        Json jm{{"index", t},
                {"max_jacobian_defect", jdef},
                {"kronecker_residual", kronecker_residual(map)},
                {"piola_residual", piola_residual(map)},
                {"pointwise_residual", rep.pointwise_residual},
                {"max_difference", rep.max_difference},
                {"max_converse", rep.max_converse},
                {"surfaces", js}};
        if (f.map == "random_flow") jm["seed"] = seed;
        maps.push_back(jm);
    }
    out.verdict_ok = worst_diff <= kFluxTol && worst_point <= kPointwiseTol;
    out.result = {{"command", "flux-audit"},
                  {"map", f.map},
                  {"grid", {c.resolution.n1, c.resolution.n2, c.resolution.n3}},
                  {"quad", f.quad},
                  {"patch_side", f.patch_side},
                  {"flux_tolerance", kFluxTol},
                  {"pointwise_tolerance", kPointwiseTol},
                  {"max_difference", worst_diff},
                  {"max_pointwise_residual", worst_point},
                  {"passed", out.verdict_ok},
                  {"maps", maps}};
    if (f.map == "random_flow") {
        out.result["T"] = f.T;
        out.result["steps"] = f.steps;
        out.result["amplitude"] = f.amplitude;
    }
    out.files.emplace_back("flux.csv", std::move(csv));
    return out;
}

RunOutcome cmd_energy_audit(const RunConfig& c) {
    RunOutcome out;
    const EnergySpec& e = c.energy;
    const Profile1D prof = c.profile->build(c.domain);
    const Grid3D grid = make_uniform_grid(c.domain, c.resolution.n1, c.resolution.n2, c.resolution.n3);
    RandomFieldSpec rs;
    rs.amplitude = e.amplitude;
    const SolenoidalField base = random_solenoidal(c.domain, c.seed, rs);
    Json rows = Json::array();
    std::string csv = "epsilon,V_M,V_star,delta_direct,delta_EP\n";
    double worst = 0.0;
    for (double eps : e.epsilon) {
        auto w = std::make_shared<SolenoidalField>(base.scaled(eps));
        const FlowMap map = flow_from_divfree_field(w, grid, e.T, e.steps);
        const PotentialVariation pv = potential_variation_exact(map, prof, c.params);
        const EnergyReport er = energy_report(map.eta, prof, c.params, grid);
        const double rel = pv.delta_direct != 0.0 ? std::fabs(-pv.V_star - pv.delta_direct) / std::fabs(pv.delta_direct)
                                                  : std::fabs(pv.V_star);
        worst = std::max(worst, rel);
        rows.push_back({{"epsilon", eps},
                        {"V_M", er.V_M},
                        {"V_star", pv.V_star},
                        {"delta_direct", pv.delta_direct},
                        {"delta_EP", er.delta_EP},
                        {"N_grho", er.N_grho},
                        {"identity_relative_error", rel},
                        {"max_jacobian_defect", pv.max_jacobian_defect}});
        csv += csv_line({eps, er.V_M, pv.V_star, pv.delta_direct, er.delta_EP});
    }
    out.verdict_ok = worst <= kIdentityTol;
    out.result = {{"command", "energy-audit"},
                  {"seed", c.seed},
                  {"grid", {c.resolution.n1, c.resolution.n2, c.resolution.n3}},
                  {"T", e.T},
                  {"steps", e.steps},
                  {"amplitude", e.amplitude},
                  {"identity_tolerance", kIdentityTol},
                  {"max_identity_relative_error", worst},
                  {"passed", out.verdict_ok},
                  {"rows", rows}};
    out.files.emplace_back("energy.csv", std::move(csv));
    return out;
}

void log(const RunOptions& o, const std::string& msg) {
    if (!o.quiet) std::cerr << "mhd-inhibit: " << msg << '\n';
}

int write_run(const RunConfig& c, const RunOptions& o, const fs::path& dir);

int run_sweep(const RunConfig& c, const RunOptions& o, const fs::path& dir) {
    const int count = static_cast<int>(c.sweep_runs.size());
    std::vector<int> codes(count, 1);
    std::atomic<int> next{0};
    const int threads = std::max(1, std::min(o.threads, count));
    auto worker = [&] {
        for (int i = next++; i < count; i = next++) {
            char name[32];
            std::snprintf(name, sizeof name, "run_%03d", i);
            RunOptions child = o;
            child.threads = 1;
            codes[i] = write_run(c.sweep_runs[i], child, dir / name);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    Json runs = Json::array();
    int code = 0;
    for (int i = 0; i < count; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "run_%03d", i);
        runs.push_back({{"directory", name}, {"command", c.sweep_runs[i].command}, {"exit_code", codes[i]}});
        if (codes[i] == 1) code = 1;
        else if (codes[i] == 2 && code == 0) code = 2;
    }
    const Json result{{"command", "sweep"}, {"runs", runs}, {"exit_code", code}};
    write_text_file((dir / "result.json").string(), to_json_text(result));
    return code;
}

int write_run(const RunConfig& c0, const RunOptions& o, const fs::path& dir) {
    const auto start = std::chrono::steady_clock::now();
    RunConfig c = c0;
    if (o.seed) c.seed = *o.seed;
    int code = 0;
    std::string error;
    try {
        fs::create_directories(dir);
        if (c.command == "sweep") {
            code = run_sweep(c, o, dir);
        } else {
            RunOutcome r = execute(c, o.threads);
            write_text_file((dir / "result.json").string(), to_json_text(r.result));
            for (const auto& [name, text] : r.files) write_text_file((dir / name).string(), text);
            code = r.verdict_ok ? 0 : 2;
        }
    } catch (const std::exception& e) {
        error = e.what();
        code = 1;
        log(o, c.command + ": " + error);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Json manifest{{"tool", "mhd-inhibit"}, {"version", kVersion}, {"command", c.command}, {"seed", c.seed},
                  {"threads", o.threads},  {"exit_code", code},  {"wall_time_s", wall}};
    if (!error.empty()) manifest["error"] = error;
    manifest["config"] = c.echo;
    try {
        write_text_file((dir / "manifest.json").string(), to_json_text(manifest));
    } catch (const std::exception& e) {
        log(o, e.what());
        return 1;
    }
    if (code != 1) {
        char buf[96];
        std::snprintf(buf, sizeof buf, " finished in %.3f s, exit %d", wall, code);
        log(o, c.command + buf);
    }
    return code;
}

}  // namespace

RunOutcome execute(const RunConfig& c, int threads) {
    RunOutcome out;
    if (c.command == "threshold") out = cmd_threshold(c);
    else if (c.command == "mode-sim") out = cmd_mode_sim(c);
    else if (c.command == "boundary-scan") out = cmd_boundary_scan(c);
    else if (c.command == "landscape") out = cmd_landscape(c, std::max(1, threads));
    else if (c.command == "flux-audit") out = cmd_flux_audit(c);
    else if (c.command == "energy-audit") out = cmd_energy_audit(c);
    else throw InvalidArgument("execute: command '" + c.command + "' has no single-run form");
    Json head{{"command", out.result["command"]},
              {"version", kVersion},
              {"params", params_json(c.params)},
              {"domain", domain_json(c.domain)},
              {"resolution",
               {{"n", c.resolution.n}, {"n1", c.resolution.n1}, {"n2", c.resolution.n2}, {"n3", c.resolution.n3}}},
              {"tol", c.tol},
              {"seed", c.seed}};
    for (auto it = out.result.begin(); it != out.result.end(); ++it)
        if (it.key() != "command" && it.key() != "seed") head[it.key()] = it.value();
    out.result = std::move(head);
    return out;
}

int run(const RunConfig& config, const RunOptions& opts) {
    const fs::path dir = opts.out ? fs::path(*opts.out) : fs::path(config.output_dir);
    return write_run(config, opts, dir);
}

}  // namespace mhdi::cli
