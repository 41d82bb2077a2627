#pragma once

#include "mhd_inhibit/cli/config.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mhdi::cli {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
    std::optional<std::string> out;         // overrides config.output_dir
    std::optional<std::uint64_t> seed;      // overrides config.seed
    int threads = 1;
    bool quiet = false;
};

/// In-memory result of one command: the result.json payload and side files.
struct RunOutcome {
    Json result;
    std::vector<std::pair<std::string, std::string>> files;  // name, content
    bool verdict_ok = true;
};

/// Runs a non-sweep command without touching the file system.
RunOutcome execute(const RunConfig& config, int threads = 1);

/// Runs the command and writes result.json, manifest.json and side files into the
/// output directory. Returns 0 on success, 2 when a checked assertion fails, 1 on error.
int run(const RunConfig& config, const RunOptions& opts = {});

}  // namespace mhdi::cli
