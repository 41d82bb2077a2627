#include "mhd_inhibit/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace mhdi::cli {

namespace fs = std::filesystem;

namespace {

// Strict view of one JSON object: every key must be read exactly once.
class Section {
public:
    Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_.empty() ? "(root)" : path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& raw(const std::string& key) {
        used_.insert(key);
        return j_.at(key);
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    [[noreturn]] static void fail(const std::string& where, const std::string& what) {
        throw ConfigError(where + ": " + what);
    }

    double number(const std::string& key, double def) {
        if (!has(key)) return def;
        const Json& v = raw(key);
        if (!v.is_number()) fail(at(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(at(key), "must be finite");
        return x;
    }

    double positive(const std::string& key, double def) {
        const double x = number(key, def);
        if (!(x > 0.0)) fail(at(key), "must be positive");
        return x;
    }

    double nonnegative(const std::string& key, double def) {
        const double x = number(key, def);
        if (!(x >= 0.0)) fail(at(key), "must be nonnegative");
        return x;
    }

    long long integer(const std::string& key, long long def, long long lo,
                      long long hi = std::numeric_limits<int>::max()) {
        if (!has(key)) return def;
        const Json& v = raw(key);
        if (!v.is_number_integer()) fail(at(key), "expected an integer");
        const long long x = v.get<long long>();
        if (x < lo || x > hi) fail(at(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return x;
    }

    std::uint64_t u64(const std::string& key, std::uint64_t def) {
        if (!has(key)) return def;
        const Json& v = raw(key);
        if (!v.is_number_unsigned()) fail(at(key), "expected a nonnegative integer");
        return v.get<std::uint64_t>();
    }

    bool boolean(const std::string& key, bool def) {
        if (!has(key)) return def;
        const Json& v = raw(key);
        if (!v.is_boolean()) fail(at(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, const std::string& def) {
        if (!has(key)) return def;
        const Json& v = raw(key);
        if (!v.is_string()) fail(at(key), "expected a string");
        return v.get<std::string>();
    }

    std::string choice(const std::string& key, const std::string& def, const std::vector<std::string>& allowed) {
        const std::string s = string(key, def);
        for (const auto& a : allowed)
            if (a == s) return s;
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        fail(at(key), "unknown value '" + s + "' (expected one of: " + list + ")");
    }

    std::vector<double> numbers(const std::string& key, const std::vector<double>& def) {
        if (!has(key)) return def;
        const Json& v = raw(key);
        if (!v.is_array()) fail(at(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) fail(at(key) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
            if (!std::isfinite(out.back())) fail(at(key) + "[" + std::to_string(i) + "]", "must be finite");
        }
        return out;
    }

    Section sub(const std::string& key) { return Section(raw(key), at(key)); }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) fail(at(it.key()), "unknown key");
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> used_;
};

const std::vector<std::string> kCommands = {"threshold",   "mode-sim",     "boundary-scan", "landscape",
                                            "flux-audit",  "energy-audit", "sweep"};

void read_params(Section s, PhysicalParams& p) {
    p.g = s.positive("g", p.g);
    p.lambda = s.positive("lambda", p.lambda);
    p.mu = s.nonnegative("mu", p.mu);
    p.alpha_beta = s.nonnegative("alpha_beta", p.alpha_beta);
    if (s.has("M_bar")) {
        const std::vector<double> m = s.numbers("M_bar", {});
        if (m.size() != 3) Section::fail(s.at("M_bar"), "expected 3 components");
        p.M_bar = {m[0], m[1], m[2]};
    }
    s.finish();
    try {
        p.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

void read_domain(Section s, SlabDomain& d) {
    d.a = s.number("a", d.a);
    d.b = s.number("b", d.b);
    if (!(d.a < d.b)) Section::fail(s.at("b"), "must exceed domain.a");
    d.L1 = s.positive("L1", d.L1);
    d.L2 = s.positive("L2", d.L2);
    if (s.has("interface") && !s.raw("interface").is_null()) {
        d.interface = s.number("interface", 0.0);
        if (!(d.a < *d.interface && *d.interface < d.b))
            Section::fail(s.at("interface"), "must lie strictly inside (a, b)");
    }
    s.finish();
}

ProfileSpec read_profile(Section s, const fs::path& base) {
    ProfileSpec p;
    const std::string kind = s.choice("kind", "density", {"density", "temperature"});
    p.kind = kind == "density" ? ProfileKind::density : ProfileKind::temperature;
    p.samples = static_cast<int>(s.integer("samples", p.samples, 5));
    if (s.has("csv")) {
        if (s.has("form") || s.has("coefficients"))
            Section::fail(s.at("csv"), "give either csv or form/coefficients, not both");
        fs::path path = s.string("csv", "");
        if (path.is_relative()) path = base / path;
        if (!fs::exists(path)) Section::fail(s.at("csv"), "file not found: " + path.string());
        p.csv = path.string();
    } else {
        p.form = s.choice("form", "linear", {"linear", "exponential", "sinusoidal", "bump"});
        p.coefficients = s.numbers("coefficients", {});
        try {
            (void)ProfileShape::from_name(p.form, p.coefficients);
        } catch (const InvalidArgument& e) {
            Section::fail(s.at("coefficients"), e.what());
        }
    }
    s.finish();
    return p;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open configuration file");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": malformed JSON: " + e.what());
    }
}

}  // namespace

Profile1D ProfileSpec::build(const SlabDomain& domain) const {
    if (!csv.empty()) return load_profile_csv(csv, kind);
    return make_profile(ProfileShape::from_name(form, coefficients), kind, domain.a, domain.b, samples);
}

RunConfig parse_config_json(const Json& j, const fs::path& base_dir) {
    Section root(j, "");
    RunConfig c;
    c.base_dir = base_dir;
    c.echo = j;
    if (!root.has("command")) Section::fail("command", "required");
    c.command = root.choice("command", "", kCommands);
    if (root.has("params")) read_params(root.sub("params"), c.params);
    if (root.has("domain")) read_domain(root.sub("domain"), c.domain);
    if (root.has("profile")) c.profile = read_profile(root.sub("profile"), base_dir);
    if (root.has("resolution")) {
        Section s = root.sub("resolution");
        c.resolution.n = static_cast<int>(s.integer("n", c.resolution.n, 64));
        c.resolution.n1 = static_cast<int>(s.integer("n1", c.resolution.n1, 4));
        c.resolution.n2 = static_cast<int>(s.integer("n2", c.resolution.n2, 4));
        c.resolution.n3 = static_cast<int>(s.integer("n3", c.resolution.n3, 8));
        s.finish();
    }
    if (root.has("tolerances")) {
        Section s = root.sub("tolerances");
        c.tol = s.positive("tol", c.tol);
        s.finish();
    }
    c.seed = root.u64("seed", c.seed);
    c.output_dir = root.string("output_dir", c.output_dir);

    if (root.has("threshold")) {
        Section s = root.sub("threshold");
        ThresholdSpec& t = c.threshold;
        t.variant = s.choice("variant", t.variant, {"nmrt", "benard", "stratified"});
        t.rho_plus = s.positive("rho_plus", t.rho_plus);
        t.rho_minus = s.positive("rho_minus", t.rho_minus);
        t.h = s.positive("h", t.h);
        t.l = s.positive("l", t.l);
        s.finish();
    }
    if (root.has("mode")) {
        Section s = root.sub("mode");
        ModeSimSpec& m = c.mode;
        m.n = static_cast<int>(s.integer("n", m.n, 1));
        m.rho_bar = s.positive("rho_bar", m.rho_bar);
        m.rho_prime = s.number("rho_prime", m.rho_prime);
        m.eta0 = s.number("eta0", m.eta0);
        m.eta_dot0 = s.number("eta_dot0", m.eta_dot0);
        m.T = s.positive("T", m.T);
        m.dt = s.positive("dt", m.dt);
        s.finish();
    }
    if (root.has("scan")) {
        Section s = root.sub("scan");
        ScanSpec& m = c.scan;
        m.M3_values = s.numbers("M3_values", m.M3_values);
        m.M3_factors = s.numbers("M3_factors", m.M3_factors);
        m.n_max = static_cast<int>(s.integer("n_max", m.n_max, 1));
        m.rho_bar = s.positive("rho_bar", m.rho_bar);
        m.rho_prime = s.positive("rho_prime", m.rho_prime);
        s.finish();
    }
    if (root.has("landscape")) {
        Section s = root.sub("landscape");
        LandscapeSpec& l = c.landscape;
        l.variant = s.choice("variant", l.variant, {"continuous", "stratified"});
        l.condition = s.choice("condition", "instability", {"instability", "stability"}) == "stability"
                          ? Condition::stability
                          : Condition::instability;
        l.eps = s.nonnegative("eps", l.eps);
        l.trials = static_cast<int>(s.integer("trials", l.trials, 1));
        l.eps_max = s.positive("eps_max", l.eps_max);
        l.rho_plus = s.positive("rho_plus", l.rho_plus);
        l.rho_minus = s.positive("rho_minus", l.rho_minus);
        l.h = s.positive("h", l.h);
        l.l = s.positive("l", l.l);
        s.finish();
    }
    if (root.has("flux")) {
        Section s = root.sub("flux");
        FluxSpec& f = c.flux;
        f.map = s.choice("map", f.map, {"identity", "shear", "random_flow"});
        f.maps = static_cast<int>(s.integer("maps", f.maps, 1));
        f.amplitude = s.number("amplitude", f.amplitude);
        f.shear = s.number("shear", f.shear);
        f.T = s.number("T", f.T);
        f.steps = static_cast<int>(s.integer("steps", f.steps, 16));
        f.patch_side = s.positive("patch_side", f.patch_side);
        f.quad = static_cast<int>(s.integer("quad", f.quad, 1, 256));
        s.finish();
    }
    if (root.has("energy")) {
        Section s = root.sub("energy");
        EnergySpec& e = c.energy;
        e.epsilon = s.numbers("epsilon", e.epsilon);
        if (e.epsilon.empty()) Section::fail(s.at("epsilon"), "must not be empty");
        e.amplitude = s.number("amplitude", e.amplitude);
        e.T = s.number("T", e.T);
        e.steps = static_cast<int>(s.integer("steps", e.steps, 16));
        s.finish();
    }
    if (root.has("runs")) {
        const Json& runs = root.raw("runs");
        if (!runs.is_array()) Section::fail("runs", "expected an array");
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const std::string where = "runs[" + std::to_string(i) + "]";
            RunConfig child;
            try {
                if (runs[i].is_string()) {
                    fs::path p = runs[i].get<std::string>();
                    if (p.is_relative()) p = base_dir / p;
                    if (!fs::exists(p)) Section::fail(where, "file not found: " + p.string());
                    child = parse_config_json(load_json(p.string()), p.parent_path());
                } else {
                    child = parse_config_json(runs[i], base_dir);
                }
            } catch (const ConfigError& e) {
                throw ConfigError(where + "." + e.what());
            }
            if (child.command == "sweep") Section::fail(where + ".command", "nested sweeps are not supported");
            c.sweep_runs.push_back(std::move(child));
        }
    }
    root.finish();

    if (c.command == "sweep" && c.sweep_runs.empty()) Section::fail("runs", "sweep needs at least one run");
    const bool needs_profile = c.command == "threshold" ? c.threshold.variant != "stratified"
                               : c.command == "landscape" ? c.landscape.variant == "continuous"
                               : c.command == "energy-audit";
    if (needs_profile && !c.profile) Section::fail("profile", "required for command '" + c.command + "'");
    if (c.profile && c.command == "threshold") {
        const ProfileKind want = c.threshold.variant == "benard" ? ProfileKind::temperature : ProfileKind::density;
        if (needs_profile && c.profile->kind != want)
            Section::fail("profile.kind", c.threshold.variant == "benard" ? "must be temperature" : "must be density");
    }
    if (c.command == "threshold" && c.threshold.variant == "benard" && !(c.params.alpha_beta > 0.0))
        Section::fail("params.alpha_beta", "must be positive for the benard threshold");
    return c;
}

RunConfig parse_config(const std::string& path) {
    const fs::path p(path);
    return parse_config_json(load_json(path), p.has_parent_path() ? p.parent_path() : fs::path("."));
}

}  // namespace mhdi::cli
