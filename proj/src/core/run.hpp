#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace linproc {

/// git-describe style version stamped into every artifact.
const char* version_string() noexcept;

inline constexpr std::uint64_t default_seed = 1;

struct RunRequest {
    std::string command;  // check, build, simulate, annealed, quenched, failure, wip, tn, trends
    std::string spec_path;               // may be empty: configuration from overrides only
    std::optional<std::uint64_t> seed;   // wins over a `seed` key in the file
    std::string out_dir;                 // empty: compute only, write nothing
    std::vector<std::string> overrides;  // key=value
    unsigned threads = 1;
};

struct RunResult {
    bool pass = false;
    std::string summary;
    std::vector<std::pair<std::string, std::string>> artifacts;  // file name, contents

    const std::string& artifact(const std::string& name) const;
};

const std::vector<std::string>& commands();

/// Resolves the configuration and computes every artifact in memory.
/// Throws linproc::Error on any failure; nothing is written.
RunResult prepare(const RunRequest& request);

/// prepare() and then write the artifacts into out_dir.
RunResult run(const RunRequest& request);

} // namespace linproc
