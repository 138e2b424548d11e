#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "visolve/config.hpp"
#include "visolve/engine.hpp"

namespace visolve {

/// Header of the per-iteration CSV.
inline constexpr std::string_view kRunCsvHeader =
    "k,beta_k,trials,log_S,gap_bar,beta_hat,bound_fixed,bound_adaptive,elapsed_ms";

/// Per-iteration CSV, full precision (%.17g), NaN as "nan". The stop reason and
/// final iterate follow the table as '#'-prefixed lines.
std::string run_csv(const RunReport& report);

/// Records of a run CSV; '#' lines and the header are skipped.
std::vector<RunRecord> parse_run_csv(std::string_view text);

/// Aligned markdown table, 5 significant digits.
std::string run_markdown(const RunReport& report);

/// NaN and infinities are written as null and read back as NaN.
nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

std::string format_run(const RunReport& report, OutputFormat format);

/// 5-significant-digit scientific notation ("8.9742e-01"); "-" for NaN.
std::string sci5(double v);

/// One algorithm's column group in a comparison.
struct ComparisonColumn {
    std::string label; ///< variant name, "#2", "#3" appended to repeats
    Variant variant;
    RunReport report;
};

struct ComparisonCell {
    double bound = 0.0; ///< fixed-rate bound for the fixed variant, adaptive-rate bound otherwise
    double elapsed_ms = 0.0;
    double beta_n = 0.0;
    double beta_hat = 0.0;
    std::size_t trials = 0; ///< cumulative line-search trials through N
    bool reached = false;   ///< false when the run stopped before N
};

struct ComparisonRow {
    std::size_t n = 0;
    double bound_fixed = 0.0;
    std::vector<ComparisonCell> cells; ///< parallel to Comparison::columns
};

struct Comparison {
    std::vector<ComparisonColumn> columns;
    std::vector<ComparisonRow> rows;
};

/// Builds the rows from finished runs (one per checkpoint).
Comparison build_comparison(std::vector<ComparisonColumn> columns, const std::vector<std::size_t>& checkpoints,
                            double mu, std::optional<double> lipschitz);

/// Labels for an algorithm list, with "#k" on repeats.
std::vector<std::string> comparison_labels(const std::vector<Variant>& algorithms);

/// CSV: 5-digit columns with a parallel "_full" column at full precision.
std::string comparison_csv(const Comparison& c);
/// Markdown: N, fixed-rate bound, then per algorithm its ms, and for adaptive
/// variants the adaptive bound, beta_N, beta_hat and trials.
std::string comparison_markdown(const Comparison& c);
nlohmann::json comparison_json(const Comparison& c);

std::string format_comparison(const Comparison& c, OutputFormat format);

} // namespace visolve
