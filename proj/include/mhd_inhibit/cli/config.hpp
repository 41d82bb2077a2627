#pragma once

// Run configuration: strict JSON (unknown keys are errors) with field-path diagnostics.

#include "mhd_inhibit/json_output.hpp"
#include "mhd_inhibit/landscape.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mhdi::cli {

/// Schema violation; the message starts with the offending field path.
class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

struct ProfileSpec {
    ProfileKind kind = ProfileKind::density;
    std::string form;  // closed form name, empty when csv is set
    std::vector<double> coefficients;
    std::string csv;   // resolved path
    int samples = 2001;

    Profile1D build(const SlabDomain& domain) const;
};

struct Resolution {
    int n = 1001;
    int n1 = 8;
    int n2 = 8;
    int n3 = 33;
};

struct ThresholdSpec {
    std::string variant = "nmrt";  // nmrt | benard | stratified
    double rho_plus = 2.0;
    double rho_minus = 1.0;
    double h = 1.0;
    double l = 1.0;
};

struct ModeSimSpec {
    int n = 1;
    double rho_bar = 1.0;
    double rho_prime = 1.0;
    double eta0 = 1.0;
    double eta_dot0 = 0.0;
    double T = 20.0;
    double dt = 1e-3;
};

struct ScanSpec {
    std::vector<double> M3_values;
    std::vector<double> M3_factors;  // multiples of m_N, appended after M3_values
    int n_max = 32;
    double rho_bar = 1.0;
    double rho_prime = 1.0;
};

struct LandscapeSpec {
    std::string variant = "continuous";  // continuous | stratified
    Condition condition = Condition::instability;
    double eps = 1e-2;
    int trials = 200;
    double eps_max = 0.05;
    double rho_plus = 2.0;
    double rho_minus = 1.0;
    double h = 2.0;
    double l = 2.0;
};

struct FluxSpec {
    std::string map = "random_flow";  // identity | shear | random_flow
    int maps = 1;
    double amplitude = 0.3;
    double shear = 0.1;
    double T = 1.0;
    int steps = 128;
    double patch_side = 1.0;
    int quad = 32;
};

struct EnergySpec {
    std::vector<double> epsilon{1.0, 0.5, 0.25, 0.125};
    double amplitude = 0.3;
    double T = 1.0;
    int steps = 128;
};

struct RunConfig {
    std::string command;
    PhysicalParams params;
    SlabDomain domain;
    std::optional<ProfileSpec> profile;
    Resolution resolution;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    std::string output_dir = "out";

    ThresholdSpec threshold;
    ModeSimSpec mode;
    ScanSpec scan;
    LandscapeSpec landscape;
    FluxSpec flux;
    EnergySpec energy;
    std::vector<RunConfig> sweep_runs;  // parsed child configurations

    Json echo;  // the configuration as read
    std::filesystem::path base_dir;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_json(const Json& j, const std::filesystem::path& base_dir);

}  // namespace mhdi::cli
