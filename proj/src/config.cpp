#include "visolve/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "visolve/errors.hpp"

namespace visolve {

using nlohmann::json;

std::optional<OutputFormat> parse_format(std::string_view name) noexcept {
    if (name == "csv") return OutputFormat::csv;
    if (name == "md" || name == "markdown") return OutputFormat::md;
    if (name == "json") return OutputFormat::json;
    return std::nullopt;
}

std::string_view format_name(OutputFormat f) noexcept {
    switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::md: return "md";
    case OutputFormat::json: return "json";
    }
    return "csv";
}

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    std::vector<std::string> unknown;
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key())) unknown.push_back(item.key());
    }
    if (!unknown.empty()) {
        std::string msg = where + ": unknown key(s):";
        for (const auto& k : unknown) msg += " '" + k + "'";
        throw ConfigError(msg);
    }
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(where + ": missing key '" + key + "'");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where + ": number must be finite");
    return d;
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    return number(*it, where + "." + key);
}

Vector vector_of(const json& v, std::size_t n, const std::string& where) {
    if (!v.is_array()) throw ConfigError(where + ": expected an array");
    if (v.size() != n) {
        throw ConfigError(where + ": expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
    return Vector(std::move(out));
}

Matrix matrix_of(const json& v, std::size_t n, const std::string& where) {
    if (!v.is_array() || v.size() != n) throw ConfigError(where + ": expected " + std::to_string(n) + " rows");
    std::vector<double> data;
    for (std::size_t i = 0; i < n; ++i) {
        const Vector row = vector_of(v[i], n, where + "[" + std::to_string(i) + "]");
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(n, n, std::move(data));
}

VIOperator parse_operator(const json& j, std::size_t n) {
    const std::string where = "operator";
    const std::string kind = require(j, "kind", where).get<std::string>();
    if (kind == "exp-chain") {
        check_keys(j, {"kind", "coupling", "lipschitz", "strong_monotonicity"}, where);
        const auto coupling = optional_number(j, "coupling", where);
        auto lip = optional_number(j, "lipschitz", where);
        auto mu = optional_number(j, "strong_monotonicity", where);
        const bool standard = !coupling || *coupling == exp_chain_constants::coupling();
        if (standard && !lip && !mu) {
            lip = exp_chain_constants::lipschitz();
            mu = exp_chain_constants::strong_monotonicity();
        }
        return VIOperator::exp_chain(n, coupling.value_or(exp_chain_constants::coupling()), lip, mu);
    }
    if (kind == "affine") {
        check_keys(j, {"kind", "A", "b", "lipschitz", "strong_monotonicity"}, where);
        return VIOperator::affine(matrix_of(require(j, "A", where), n, where + ".A"),
                                  vector_of(require(j, "b", where), n, where + ".b"),
                                  optional_number(j, "lipschitz", where),
                                  optional_number(j, "strong_monotonicity", where));
    }
    throw ConfigError("operator: unknown kind '" + kind + "' (expected exp-chain or affine)");
}

FeasibleSet parse_set(const json& j, std::size_t n) {
    const std::string where = "set";
    const std::string kind = require(j, "kind", where).get<std::string>();
    if (kind == "ball") {
        check_keys(j, {"kind", "center", "radius"}, where);
        Vector center = j.contains("center") ? vector_of(j["center"], n, "set.center") : Vector::zeros(n);
        return FeasibleSet::ball(std::move(center), optional_number(j, "radius", where).value_or(1.0));
    }
    if (kind == "box") {
        check_keys(j, {"kind", "lower", "upper"}, where);
        return FeasibleSet::box(vector_of(require(j, "lower", where), n, "set.lower"),
                                vector_of(require(j, "upper", where), n, "set.upper"));
    }
    if (kind == "whole-space") {
        check_keys(j, {"kind"}, where);
        return FeasibleSet::whole_space(n);
    }
    throw ConfigError("set: unknown kind '" + kind + "' (expected ball, box or whole-space)");
}

NormContext parse_norm(const json& j, std::size_t n) {
    const std::string where = "norm";
    const std::string kind = require(j, "kind", where).get<std::string>();
    if (kind == "identity") {
        check_keys(j, {"kind"}, where);
        return NormContext::identity(n);
    }
    if (kind == "diagonal") {
        check_keys(j, {"kind", "d"}, where);
        return NormContext::diagonal(vector_of(require(j, "d", where), n, "norm.d"));
    }
    if (kind == "dense") {
        check_keys(j, {"kind", "matrix"}, where);
        return NormContext::dense(matrix_of(require(j, "matrix", where), n, "norm.matrix"));
    }
    throw ConfigError("norm: unknown kind '" + kind + "' (expected identity, diagonal or dense)");
}

Vector parse_y0(const json& j, std::size_t n) {
    if (j.is_array()) return vector_of(j, n, "y0");
    check_keys(j, {"fill"}, "y0");
    return Vector::filled(n, number(require(j, "fill", "y0"), "y0.fill"));
}

Beta0 parse_beta0(const json& j, std::size_t n) {
    if (j.is_number()) return number(j, "beta0");
    if (j.is_string()) {
        if (j.get<std::string>() != "auto") throw ConfigError("beta0: expected a number, \"auto\" or {\"auto\": {...}}");
        if (n < 2) throw ConfigError("beta0: \"auto\" without points needs dimension >= 2");
        return standard_beta0_pair(n);
    }
    check_keys(j, {"auto"}, "beta0");
    const json& pair = require(j, "auto", "beta0");
    check_keys(pair, {"x", "y"}, "beta0.auto");
    return AutoBeta0{vector_of(require(pair, "x", "beta0.auto"), n, "beta0.auto.x"),
                     vector_of(require(pair, "y", "beta0.auto"), n, "beta0.auto.y")};
}

std::vector<std::size_t> parse_checkpoints(const json& j) {
    std::vector<std::size_t> out;
    if (j.is_array()) {
        for (const auto& v : j) {
            if (!v.is_number_integer() || v.get<long long>() < 1) {
                throw ConfigError("checkpoints: entries must be positive integers");
            }
            out.push_back(v.get<std::size_t>());
        }
    } else {
        check_keys(j, {"start", "stop", "step"}, "checkpoints");
        const auto start = require(j, "start", "checkpoints").get<long long>();
        const auto stop = require(j, "stop", "checkpoints").get<long long>();
        const auto step = j.value("step", 1LL);
        if (start < 1 || step < 1 || stop < start) throw ConfigError("checkpoints: need 1 <= start <= stop, step >= 1");
        for (long long k = start; k <= stop; k += step) out.push_back(static_cast<std::size_t>(k));
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i] <= out[i - 1]) throw ConfigError("checkpoints: must be strictly increasing");
    }
    return out;
}

json vector_json(const Vector& v) { return json(v.entries()); }

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

} // namespace

ExperimentConfig parse_config(const json& j) {
    check_keys(j,
               {"dimension", "operator", "set", "norm", "y0", "algorithms", "checkpoints", "beta0", "output",
                "max_iters", "gap_tolerance", "mu", "lipschitz", "x_star", "x_star_radius"},
               "config");
    const json& dim = require(j, "dimension", "config");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) throw ConfigError("dimension: must be a positive integer");
    const auto n = dim.get<std::size_t>();

    VIOperator op = parse_operator(require(j, "operator", "config"), n);
    FeasibleSet set = j.contains("set") ? parse_set(j["set"], n) : FeasibleSet::whole_space(n);
    NormContext ctx = j.contains("norm") ? parse_norm(j["norm"], n) : NormContext::identity(n);
    require_projection_support(set, ctx);
    Vector y0 = parse_y0(require(j, "y0", "config"), n);
    if (!contains(set, ctx, y0, 1e-12)) throw ConfigError("y0: point is not in the feasible set");

    auto mu = optional_number(j, "mu", "config");
    if (!mu) mu = op.declared_strong_monotonicity();
    if (!mu) throw ConfigError("config: no strong monotonicity constant (set 'mu' or operator.strong_monotonicity)");
    auto lip = optional_number(j, "lipschitz", "config");
    if (!lip) lip = op.declared_lipschitz();

    std::optional<Vector> x_star;
    if (j.contains("x_star")) x_star = vector_of(j["x_star"], n, "x_star");

    ExperimentConfig cfg{Instance{"config", std::move(op), std::move(set), std::move(ctx), *mu, lip, std::move(y0),
                                  std::move(x_star),
                                  optional_number(j, "x_star_radius", "config").value_or(0.0)},
                         {},
                         {},
                         1.0,
                         45,
                         std::nullopt,
                         OutputFormat::csv,
                         std::nullopt};

    const json& algs = require(j, "algorithms", "config");
    if (!algs.is_array() || algs.empty()) throw ConfigError("algorithms: expected a non-empty array");
    for (const auto& a : algs) {
        const auto name = a.get<std::string>();
        const auto v = parse_variant(name);
        if (!v) throw ConfigError("algorithms: unknown algorithm '" + name + "'");
        cfg.algorithms.push_back(*v);
    }
    if (j.contains("checkpoints")) cfg.checkpoints = parse_checkpoints(j["checkpoints"]);
    if (j.contains("beta0")) {
        cfg.beta0 = parse_beta0(j["beta0"], n);
    } else if (n >= 2) {
        cfg.beta0 = standard_beta0_pair(n);
    } else {
        throw ConfigError("config: beta0 is required for dimension 1");
    }
    if (j.contains("max_iters")) {
        const json& m = j["max_iters"];
        if (!m.is_number_integer() || m.get<long long>() < 0) throw ConfigError("max_iters: must be a non-negative integer");
        cfg.max_iters = m.get<std::size_t>();
    } else if (!cfg.checkpoints.empty()) {
        cfg.max_iters = cfg.checkpoints.back();
    }
    cfg.gap_tolerance = optional_number(j, "gap_tolerance", "config");
    if (j.contains("output")) {
        const json& o = j["output"];
        check_keys(o, {"format", "path"}, "output");
        if (o.contains("format")) {
            const auto f = parse_format(o["format"].get<std::string>());
            if (!f) throw ConfigError("output.format: expected csv, md or json");
            cfg.format = *f;
        }
        if (o.contains("path")) cfg.output_path = o["path"].get<std::string>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    try {
        return parse_config(j);
    } catch (const json::type_error& e) {
        throw ConfigError(std::string("config: wrong value type: ") + e.what());
    }
}

SolverConfig solver_config(const ExperimentConfig& config, Variant variant) {
    SolverConfig s = solver_config_for(config.instance, variant, config.max_iters, config.beta0);
    s.gap_tolerance = config.gap_tolerance;
    return s;
}

json instance_to_json(const Instance& inst, const Beta0& beta0, std::vector<Variant> algorithms,
                      std::size_t max_iters) {
    const std::size_t n = inst.op.dimension();
    json j;
    j["dimension"] = n;
    json op;
    if (const auto* e = inst.op.as_exp_chain()) {
        op = {{"kind", "exp-chain"}, {"coupling", e->coupling}};
    } else {
        const auto& a = *inst.op.as_affine();
        op = {{"kind", "affine"}, {"A", matrix_json(a.a)}, {"b", vector_json(a.b)}};
    }
    if (auto l = inst.op.declared_lipschitz()) op["lipschitz"] = *l;
    if (auto m = inst.op.declared_strong_monotonicity()) op["strong_monotonicity"] = *m;
    j["operator"] = op;

    switch (inst.set.kind()) {
    case FeasibleSet::Kind::ball:
        j["set"] = {{"kind", "ball"}, {"center", vector_json(inst.set.center())}, {"radius", inst.set.radius()}};
        break;
    case FeasibleSet::Kind::box:
        j["set"] = {{"kind", "box"}, {"lower", vector_json(inst.set.lower())}, {"upper", vector_json(inst.set.upper())}};
        break;
    case FeasibleSet::Kind::whole_space: j["set"] = {{"kind", "whole-space"}}; break;
    }
    switch (inst.ctx.kind()) {
    case NormContext::Kind::identity: j["norm"] = {{"kind", "identity"}}; break;
    case NormContext::Kind::diagonal:
        j["norm"] = {{"kind", "diagonal"}, {"d", vector_json(inst.ctx.diagonal_entries())}};
        break;
    case NormContext::Kind::dense: j["norm"] = {{"kind", "dense"}, {"matrix", matrix_json(inst.ctx.matrix())}}; break;
    }
    j["y0"] = vector_json(inst.y0);
    j["mu"] = inst.mu;
    if (inst.lipschitz) j["lipschitz"] = *inst.lipschitz;
    if (inst.x_star) j["x_star"] = vector_json(*inst.x_star);
    if (inst.x_star_radius > 0.0) j["x_star_radius"] = inst.x_star_radius;
    json algs = json::array();
    for (Variant v : algorithms) algs.push_back(std::string(variant_name(v)));
    j["algorithms"] = algs;
    if (const auto* b = std::get_if<double>(&beta0)) {
        j["beta0"] = *b;
    } else {
        const auto& p = std::get<AutoBeta0>(beta0);
        j["beta0"] = {{"auto", {{"x", vector_json(p.x)}, {"y", vector_json(p.y)}}}};
    }
    j["max_iters"] = max_iters;
    return j;
}

} // namespace visolve
