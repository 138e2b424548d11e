#include "visolve/commands.hpp"

#include <fstream>
#include <future>
#include <ostream>

#include "visolve/errors.hpp"

namespace visolve {

namespace {

void emit(const std::string& text, const std::optional<std::string>& path, std::ostream& out) {
    if (!path || *path == "-") {
        out << text;
        return;
    }
    std::ofstream file(*path);
    if (!file) throw ConfigError("cannot write output file '" + *path + "'");
    file << text;
}

void apply_overrides(ExperimentConfig& cfg, const RunOverrides& o) {
    if (o.iters) cfg.max_iters = *o.iters;
    if (o.format) cfg.format = *o.format;
    if (o.output) cfg.output_path = *o.output;
}

// Maps exceptions to exit codes with a one-line diagnostic.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

} // namespace

int cmd_run(const std::filesystem::path& config, const RunOverrides& overrides, std::ostream& out,
            std::ostream& err) {
    return guarded(err, [&] {
        ExperimentConfig cfg = load_config(config);
        apply_overrides(cfg, overrides);
        Variant variant = cfg.algorithms.front();
        if (overrides.algorithm) {
            const auto v = parse_variant(*overrides.algorithm);
            if (!v) throw ConfigError("unknown algorithm '" + *overrides.algorithm + "'");
            variant = *v;
        }
        const Instance& inst = cfg.instance;
        const RunReport report = run(solver_config(cfg, variant), inst.op, inst.set, inst.ctx);
        emit(format_run(report, cfg.format), cfg.output_path, out);

        const RunRecord& last = report.records.back();
        char line[256];
        std::snprintf(line, sizeof(line), "%s: k=%zu stop=%s gap_bar=%.4e beta=%.4e trials=%zu\n",
                      std::string(variant_name(variant)).c_str(), last.k,
                      std::string(stop_reason_name(report.stop)).c_str(), last.gap_bar, last.beta_k,
                      report.total_trials);
        err << line;
        if (!report.diagnostic.empty()) err << report.diagnostic << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_compare(const std::filesystem::path& config, const RunOverrides& overrides, std::ostream& out,
                std::ostream& err) {
    return guarded(err, [&] {
        ExperimentConfig cfg = load_config(config);
        apply_overrides(cfg, overrides);
        if (overrides.algorithm) throw ConfigError("compare takes its algorithms from the config file");
        if (cfg.algorithms.size() < 2) throw ConfigError("compare needs at least two algorithms");
        if (cfg.checkpoints.empty()) throw ConfigError("compare needs checkpoints");
        cfg.max_iters = std::max(cfg.max_iters, cfg.checkpoints.back());

        // Each run owns its state; the instance is shared read-only.
        const Instance& inst = cfg.instance;
        std::vector<std::future<RunReport>> jobs;
        for (Variant v : cfg.algorithms) {
            SolverConfig sc = solver_config(cfg, v);
            validate(sc, inst.op, inst.set, inst.ctx);
            jobs.push_back(std::async(std::launch::async,
                                      [&inst, sc] { return run(sc, inst.op, inst.set, inst.ctx); }));
        }
        const auto labels = comparison_labels(cfg.algorithms);
        std::vector<ComparisonColumn> columns;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            columns.push_back(ComparisonColumn{labels[i], cfg.algorithms[i], jobs[i].get()});
        }
        const Comparison table = build_comparison(std::move(columns), cfg.checkpoints, inst.mu, inst.lipschitz);
        emit(format_comparison(table, cfg.format), cfg.output_path, out);
        for (const auto& col : table.columns) {
            if (!col.report.diagnostic.empty()) err << col.label << ": " << col.report.diagnostic << '\n';
        }
        return static_cast<int>(kExitOk);
    });
}

int cmd_verify(const std::string& suite, const VerifyOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto reports = run_suites(suite, options);
        bool all_ok = true;
        for (const SuiteReport& r : reports) {
            out << (r.ok() ? "PASS " : "FAIL ") << r.name << " (" << r.checks << " checks, " << r.failures.size()
                << " violations)\n";
            for (const SuiteFailure& f : r.failures) {
                out << "  violation [" << f.check << "] " << f.detail << '\n';
                if (!f.instance.is_null()) out << "  replay config: " << f.instance.dump() << '\n';
            }
            all_ok = all_ok && r.ok();
        }
        return static_cast<int>(all_ok ? kExitOk : kExitFailed);
    });
}

} // namespace visolve
