#include "mhd_inhibit/cli/run.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Magnetic inhibition thresholds for Rayleigh-Taylor and Benard problems"};
    app.set_version_flag("--version", mhdi::cli::kVersion);
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int threads = 0;
    bool quiet = false;
    app.add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    auto* out_opt = app.add_option("--out", out, "output directory (overrides output_dir)");
    auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides seed)");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "no progress messages");
    CLI11_PARSE(app, argc, argv);

    mhdi::cli::RunOptions opts;
    if (*out_opt) opts.out = out;
    if (*seed_opt) opts.seed = seed;
    opts.quiet = quiet;
    if (threads > 0) {
        opts.threads = threads;
    } else if (const char* env = std::getenv("MHD_INHIBIT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            std::cerr << "mhd-inhibit: MHD_INHIBIT_THREADS must be a positive integer\n";
            return 1;
        }
        opts.threads = static_cast<int>(v);
    }

    try {
        const mhdi::cli::RunConfig cfg = mhdi::cli::parse_config(config);
        return mhdi::cli::run(cfg, opts);
    } catch (const std::exception& e) {
        std::cerr << "mhd-inhibit: " << e.what() << '\n';
        return 1;
    }
}
