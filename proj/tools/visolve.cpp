// Command-line front end: run, compare, verify.
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "visolve/commands.hpp"

namespace {

const std::map<std::string, visolve::OutputFormat> kFormats{
    {"csv", visolve::OutputFormat::csv}, {"md", visolve::OutputFormat::md}, {"json", visolve::OutputFormat::json}};

struct Options {
    std::string config;
    std::string algorithm;
    std::size_t iters = 0;
    std::string format;
    std::string output;
    std::string suite = "all";
    std::uint64_t seed = 1;
    double mu_scale = 1.0;
};

bool given(const CLI::App& sub, const std::string& name) {
    const CLI::Option* opt = sub.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

visolve::RunOverrides overrides(const Options& o, const CLI::App& sub) {
    visolve::RunOverrides r;
    if (given(sub, "--algorithm")) r.algorithm = o.algorithm;
    if (given(sub, "--iters")) r.iters = o.iters;
    if (given(sub, "--format")) r.format = kFormats.at(o.format);
    if (given(sub, "--output")) r.output = o.output;
    return r;
}

void add_output_flags(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "Experiment file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "md", "json"}));
    sub->add_option("--output", o.output, "Write output to this path instead of stdout");
    sub->add_option("--iters", o.iters, "Number of iterations");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive solvers for strongly monotone variational inequalities"};
    app.require_subcommand(1);
    Options o;

    auto* run = app.add_subcommand("run", "Run one algorithm and emit per-iteration records");
    add_output_flags(run, o);
    run->add_option("--algorithm", o.algorithm,
                    "fixed | adaptive-halving | adaptive-nondecreasing | baseline-projection (or alg1..alg3)");

    auto* compare = app.add_subcommand("compare", "Run the config's algorithms and emit the checkpoint table");
    add_output_flags(compare, o);

    auto* verify = app.add_subcommand("verify", "Run invariant suites");
    verify->add_option("suite", o.suite, "projections | operators | engine | certificates | oracles | all");
    verify->add_option("--seed", o.seed, "Seed for the randomized instances");
    verify->add_option("--mu-scale", o.mu_scale, "Scale the solver's mu (negative control)")->group("");
    run->add_option("--seed", o.seed, "Accepted for symmetry; runs are deterministic");
    compare->add_option("--seed", o.seed, "Accepted for symmetry; runs are deterministic");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : visolve::kExitConfig;
    }

    if (*run) return visolve::cmd_run(o.config, overrides(o, *run), std::cout, std::cerr);
    if (*compare) return visolve::cmd_compare(o.config, overrides(o, *compare), std::cout, std::cerr);
    visolve::VerifyOptions vo;
    vo.seed = o.seed;
    vo.mu_scale = o.mu_scale;
    return visolve::cmd_verify(o.suite, vo, std::cout, std::cerr);
}
