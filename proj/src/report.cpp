#include "visolve/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "visolve/bounds.hpp"
#include "visolve/errors.hpp"

namespace visolve {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string full(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty numeric field");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw std::invalid_argument("bad numeric field '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double from_num(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

// Markdown table with each column padded to its widest cell.
std::string markdown_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = std::max<std::size_t>(3, header[c].size());
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());

    std::ostringstream os;
    auto emit = [&](const std::vector<std::string>& cells) {
        os << '|';
        for (std::size_t c = 0; c < cells.size(); ++c) {
            os << ' ' << cells[c] << std::string(width[c] - cells[c].size(), ' ') << " |";
        }
        os << '\n';
    };
    emit(header);
    os << '|';
    for (std::size_t w : width) os << std::string(w + 2, '-') << '|';
    os << '\n';
    for (const auto& r : rows) emit(r);
    return os.str();
}

json vector_json(const Vector& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

} // namespace

std::string sci5(double v) {
    if (std::isnan(v)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4e", v);
    return buf;
}

std::string run_csv(const RunReport& report) {
    std::ostringstream os;
    os << kRunCsvHeader << '\n';
    for (const RunRecord& r : report.records) {
        os << r.k << ',' << full(r.beta_k) << ',' << r.trials_k << ',' << full(r.log_S) << ',' << full(r.gap_bar)
           << ',' << full(r.beta_hat_k) << ',' << full(r.bound_fixed) << ',' << full(r.bound_adaptive) << ','
           << full(r.elapsed_ms) << '\n';
    }
    os << "# variant," << variant_name(report.variant) << '\n';
    os << "# stop," << stop_reason_name(report.stop) << '\n';
    if (!report.diagnostic.empty()) os << "# diagnostic," << report.diagnostic << '\n';
    os << "# final_point";
    for (double x : report.final_point) os << ',' << full(x);
    os << '\n';
    return os.str();
}

std::vector<RunRecord> parse_run_csv(std::string_view text) {
    std::vector<RunRecord> out;
    std::istringstream is{std::string(text)};
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != kRunCsvHeader) throw std::invalid_argument("unexpected CSV header: " + line);
            header_seen = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 9) throw std::invalid_argument("expected 9 fields: " + line);
        RunRecord r;
        r.k = static_cast<std::size_t>(std::stoull(f[0]));
        r.beta_k = parse_double(f[1]);
        r.trials_k = static_cast<std::size_t>(std::stoull(f[2]));
        r.log_S = parse_double(f[3]);
        r.gap_bar = parse_double(f[4]);
        r.beta_hat_k = parse_double(f[5]);
        r.bound_fixed = parse_double(f[6]);
        r.bound_adaptive = parse_double(f[7]);
        r.elapsed_ms = parse_double(f[8]);
        out.push_back(r);
    }
    if (!header_seen) throw std::invalid_argument("missing CSV header");
    return out;
}

std::string run_markdown(const RunReport& report) {
    std::vector<std::string> header{"k", "beta_k", "trials", "log_S", "gap_bar",
                                    "beta_hat", "bound_fixed", "bound_adaptive", "elapsed_ms"};
    std::vector<std::vector<std::string>> rows;
    for (const RunRecord& r : report.records) {
        char ms[32];
        std::snprintf(ms, sizeof(ms), "%.3f", r.elapsed_ms);
        rows.push_back({std::to_string(r.k), sci5(r.beta_k), std::to_string(r.trials_k), sci5(r.log_S),
                        sci5(r.gap_bar), sci5(r.beta_hat_k), sci5(r.bound_fixed), sci5(r.bound_adaptive), ms});
    }
    std::ostringstream os;
    os << "Variant: " << variant_name(report.variant) << ", stop: " << stop_reason_name(report.stop) << "\n\n";
    os << markdown_table(header, rows);
    if (!report.diagnostic.empty()) os << "\nDiagnostic: " << report.diagnostic << '\n';
    os << "\nFinal point: [";
    for (std::size_t i = 0; i < report.final_point.size(); ++i) {
        os << (i ? ", " : "") << sci5(report.final_point[i]);
    }
    os << "]\n";
    return os.str();
}

json report_to_json(const RunReport& report) {
    json records = json::array();
    for (const RunRecord& r : report.records) {
        records.push_back({{"k", r.k},
                           {"beta_k", num(r.beta_k)},
                           {"trials", r.trials_k},
                           {"log_S", num(r.log_S)},
                           {"gap_bar", num(r.gap_bar)},
                           {"beta_hat", num(r.beta_hat_k)},
                           {"bound_fixed", num(r.bound_fixed)},
                           {"bound_adaptive", num(r.bound_adaptive)},
                           {"elapsed_ms", num(r.elapsed_ms)},
                           {"step_norm", num(r.step_norm)},
                           {"gap_floor", num(r.gap_floor)}});
    }
    json j{{"variant", std::string(variant_name(report.variant))},
           {"mu", num(report.mu)},
           {"lipschitz", report.lipschitz ? num(*report.lipschitz) : json(nullptr)},
           {"beta0", num(report.beta0)},
           {"delta0", num(report.delta0)},
           {"stop", std::string(stop_reason_name(report.stop))},
           {"diagnostic", report.diagnostic},
           {"total_trials", report.total_trials},
           {"final_point", vector_json(report.final_point)},
           {"records", records}};
    return j;
}

RunReport report_from_json(const json& j) {
    RunReport r;
    const auto v = parse_variant(j.at("variant").get<std::string>());
    if (!v) throw std::invalid_argument("unknown variant in report");
    r.variant = *v;
    r.mu = from_num(j.at("mu"));
    if (!j.at("lipschitz").is_null()) r.lipschitz = j.at("lipschitz").get<double>();
    r.beta0 = from_num(j.at("beta0"));
    r.delta0 = from_num(j.at("delta0"));
    const std::string stop = j.at("stop").get<std::string>();
    if (stop == stop_reason_name(StopReason::gap_tolerance)) r.stop = StopReason::gap_tolerance;
    else if (stop == stop_reason_name(StopReason::beta_underflow)) r.stop = StopReason::beta_underflow;
    else r.stop = StopReason::max_iters;
    r.diagnostic = j.value("diagnostic", std::string());
    r.total_trials = j.at("total_trials").get<std::size_t>();
    std::vector<double> fp;
    for (const auto& x : j.at("final_point")) fp.push_back(from_num(x));
    r.final_point = Vector(std::move(fp));
    for (const auto& e : j.at("records")) {
        RunRecord rec;
        rec.k = e.at("k").get<std::size_t>();
        rec.beta_k = from_num(e.at("beta_k"));
        rec.trials_k = e.at("trials").get<std::size_t>();
        rec.log_S = from_num(e.at("log_S"));
        rec.gap_bar = from_num(e.at("gap_bar"));
        rec.beta_hat_k = from_num(e.at("beta_hat"));
        rec.bound_fixed = from_num(e.at("bound_fixed"));
        rec.bound_adaptive = from_num(e.at("bound_adaptive"));
        rec.elapsed_ms = from_num(e.at("elapsed_ms"));
        rec.step_norm = from_num(e.at("step_norm"));
        rec.gap_floor = from_num(e.at("gap_floor"));
        r.records.push_back(rec);
    }
    return r;
}

std::string format_run(const RunReport& report, OutputFormat format) {
    switch (format) {
    case OutputFormat::csv: return run_csv(report);
    case OutputFormat::md: return run_markdown(report);
    case OutputFormat::json: return report_to_json(report).dump(2) + "\n";
    }
    return run_csv(report);
}

std::vector<std::string> comparison_labels(const std::vector<Variant>& algorithms) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
        std::size_t seen = 1;
        for (std::size_t j = 0; j < i; ++j) seen += algorithms[j] == algorithms[i];
        std::string label(variant_name(algorithms[i]));
        if (seen > 1) label += "#" + std::to_string(seen);
        labels.push_back(label);
    }
    return labels;
}

Comparison build_comparison(std::vector<ComparisonColumn> columns, const std::vector<std::size_t>& checkpoints,
                            double mu, std::optional<double> lipschitz) {
    Comparison c;
    c.columns = std::move(columns);
    for (std::size_t n : checkpoints) {
        ComparisonRow row;
        row.n = n;
        row.bound_fixed = lipschitz ? bound_value(BoundCurve::fixed_rate(*lipschitz, mu), n) : kNaN;
        for (const ComparisonColumn& col : c.columns) {
            ComparisonCell cell;
            const auto& recs = col.report.records;
            if (n < recs.size()) {
                const RunRecord& r = recs[n];
                cell.reached = true;
                cell.bound = col.variant == Variant::fixed ? r.bound_fixed : r.bound_adaptive;
                cell.elapsed_ms = r.elapsed_ms;
                cell.beta_n = r.beta_k;
                cell.beta_hat = r.beta_hat_k;
                for (std::size_t k = 1; k <= n; ++k) cell.trials += recs[k].trials_k;
            } else {
                cell.bound = cell.elapsed_ms = cell.beta_n = cell.beta_hat = kNaN;
            }
            row.cells.push_back(cell);
        }
        c.rows.push_back(std::move(row));
    }
    return c;
}

std::string comparison_csv(const Comparison& c) {
    std::ostringstream os;
    os << "N,bound_fixed,bound_fixed_full";
    for (const auto& col : c.columns) {
        const std::string& p = col.label;
        os << ',' << p << "_bound," << p << "_bound_full," << p << "_ms," << p << "_beta_N," << p
           << "_beta_N_full," << p << "_beta_hat," << p << "_beta_hat_full," << p << "_trials";
    }
    os << '\n';
    for (const auto& row : c.rows) {
        os << row.n << ',' << sci5(row.bound_fixed) << ',' << full(row.bound_fixed);
        for (const auto& cell : row.cells) {
            char ms[32];
            std::snprintf(ms, sizeof(ms), "%.3f", cell.elapsed_ms);
            os << ',' << sci5(cell.bound) << ',' << full(cell.bound) << ',' << (cell.reached ? ms : "nan") << ','
               << sci5(cell.beta_n) << ',' << full(cell.beta_n) << ',' << sci5(cell.beta_hat) << ','
               << full(cell.beta_hat) << ',' << cell.trials;
        }
        os << '\n';
    }
    return os.str();
}

std::string comparison_markdown(const Comparison& c) {
    std::vector<std::string> header{"N", "exp(-k/(1+L/mu))"};
    for (const auto& col : c.columns) {
        // The fixed variant's bound is the second column already.
        if (col.variant != Variant::fixed) header.push_back("exp(-k/(1+beta_hat/mu)) " + col.label);
        header.push_back("ms " + col.label);
        if (col.variant != Variant::fixed) {
            header.push_back("beta_N " + col.label);
            header.push_back("beta_hat " + col.label);
            header.push_back("trials " + col.label);
        }
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : c.rows) {
        std::vector<std::string> cells{std::to_string(row.n), sci5(row.bound_fixed)};
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
            const auto& cell = row.cells[i];
            char ms[32];
            std::snprintf(ms, sizeof(ms), "%.3f", cell.elapsed_ms);
            if (c.columns[i].variant != Variant::fixed) cells.push_back(sci5(cell.bound));
            cells.push_back(cell.reached ? ms : "-");
            if (c.columns[i].variant != Variant::fixed) {
                cells.push_back(sci5(cell.beta_n));
                cells.push_back(sci5(cell.beta_hat));
                cells.push_back(cell.reached ? std::to_string(cell.trials) : "-");
            }
        }
        rows.push_back(std::move(cells));
    }
    return markdown_table(header, rows);
}

json comparison_json(const Comparison& c) {
    json labels = json::array();
    for (const auto& col : c.columns) labels.push_back(col.label);
    json rows = json::array();
    for (const auto& row : c.rows) {
        json algs = json::object();
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
            const auto& cell = row.cells[i];
            algs[c.columns[i].label] = {{"bound", num(cell.bound)},
                                        {"elapsed_ms", num(cell.elapsed_ms)},
                                        {"beta_N", num(cell.beta_n)},
                                        {"beta_hat", num(cell.beta_hat)},
                                        {"trials", cell.trials},
                                        {"reached", cell.reached}};
        }
        rows.push_back({{"N", row.n}, {"bound_fixed", num(row.bound_fixed)}, {"algorithms", algs}});
    }
    return {{"algorithms", labels}, {"rows", rows}};
}

std::string format_comparison(const Comparison& c, OutputFormat format) {
    switch (format) {
    case OutputFormat::csv: return comparison_csv(c);
    case OutputFormat::md: return comparison_markdown(c);
    case OutputFormat::json: return comparison_json(c).dump(2) + "\n";
    }
    return comparison_csv(c);
}

} // namespace visolve
