#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "visolve/config.hpp"
#include "visolve/report.hpp"
#include "visolve/verify.hpp"

namespace visolve {

/// Exit codes shared by the subcommands.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailed = 1,    ///< a verification suite reported violations
    kExitConfig = 2,    ///< bad configuration or usage
    kExitNumerical = 3, ///< the solver hit a numerical failure
};

struct RunOverrides {
    std::optional<std::string> algorithm;
    std::optional<std::size_t> iters;
    std::optional<OutputFormat> format;
    std::optional<std::string> output;
};

/// Runs the config's first algorithm (or the override) and writes the report.
/// Output goes to the override path, then the config's path, then `out`.
int cmd_run(const std::filesystem::path& config, const RunOverrides& overrides, std::ostream& out,
            std::ostream& err);

/// Runs every listed algorithm concurrently and writes the checkpoint table.
int cmd_compare(const std::filesystem::path& config, const RunOverrides& overrides, std::ostream& out,
                std::ostream& err);

/// Runs a verification suite; prints a pass/fail line per suite and, for each
/// violation, the offending instance as an experiment file.
int cmd_verify(const std::string& suite, const VerifyOptions& options, std::ostream& out, std::ostream& err);

} // namespace visolve
