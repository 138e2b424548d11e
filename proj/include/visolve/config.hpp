#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "visolve/engine.hpp"
#include "visolve/instances.hpp"

namespace visolve {

enum class OutputFormat { csv, md, json };

std::optional<OutputFormat> parse_format(std::string_view name) noexcept;
std::string_view format_name(OutputFormat f) noexcept;

/// A parsed experiment file.
///
///   {
///     "dimension": 20,
///     "operator":  {"kind": "exp-chain", "coupling": 0.0049787, "lipschitz": 5.846, "strong_monotonicity": 0.2188}
///                | {"kind": "affine", "A": [[...]], "b": [...], "lipschitz": ..., "strong_monotonicity": ...},
///     "set":       {"kind": "ball", "center": [...], "radius": 1} | {"kind": "box", "lower": [...], "upper": [...]}
///                | {"kind": "whole-space"},
///     "norm":      {"kind": "identity"} | {"kind": "diagonal", "d": [...]} | {"kind": "dense", "matrix": [[...]]},
///     "y0":        {"fill": 0.2} | [...],
///     "algorithms": ["fixed", "adaptive-halving"],
///     "checkpoints": [3, 6, 9] | {"start": 3, "stop": 45, "step": 3},
///     "beta0":     "auto" | {"auto": {"x": [...], "y": [...]}} | 1.7,
///     "output":    {"format": "md", "path": "table.md"},
///     "max_iters": 45, "gap_tolerance": 1e-12, "mu": 0.2188, "lipschitz": 5.846,
///     "x_star": [...], "x_star_radius": 1e-7
///   }
///
/// An exp-chain without explicit constants and with the default coupling gets
/// the unit-ball constants. "auto" alone uses the pair (e_1, e_2). mu and
/// lipschitz default to the operator's declared constants.
/// x_star (with an optional uncertainty radius) is only used by the
/// verification suites.
struct ExperimentConfig {
    Instance instance;
    std::vector<Variant> algorithms;
    std::vector<std::size_t> checkpoints;
    Beta0 beta0 = 1.0;
    std::size_t max_iters = 45;
    std::optional<double> gap_tolerance;
    OutputFormat format = OutputFormat::csv;
    std::optional<std::string> output_path;
};

/// Throws ConfigError; unknown keys are listed in the message.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Solver configuration for one of the experiment's algorithms.
SolverConfig solver_config(const ExperimentConfig& config, Variant variant);

/// Experiment-file JSON that reproduces this instance (used to serialize failing cases).
nlohmann::json instance_to_json(const Instance& inst, const Beta0& beta0, std::vector<Variant> algorithms,
                                std::size_t max_iters);

} // namespace visolve
