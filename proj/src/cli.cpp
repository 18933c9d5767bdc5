#include "hbm/cli.hpp"

#include "hbm/berry_esseen.hpp"
#include "hbm/heat_kernel.hpp"
#include "hbm/radial_distribution.hpp"
#include "hbm/sde_sim.hpp"
#include "hbm/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <variant>

#ifndef HBM_VERSION
#define HBM_VERSION "0.0.0"
#endif

namespace hbm::cli {

namespace {

using Cell = std::variant<long, std::uint64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct RunConfig {
    std::string dimensions;
    std::vector<double> times;
    std::string t_log_range;
    std::vector<double> xs;
    std::string x_range;
    std::vector<double> radii;
    long paths = 100'000;
    double step = 1e-3;
    std::uint64_t seed = 1;
    double r0 = 1e-3;
    std::string scheme = "squared-radius";
    std::string method = "reduction";
    std::optional<double> abs_tol;
    std::optional<double> rel_tol;
    std::string out_path;
    std::string format = "csv";
    std::string suite;
};

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    }
    return v;
}

int parse_int(std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return parts;
        start = pos + 1;
    }
}

std::string to_text(const Cell& c) {
    if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
    if (const auto* u = std::get_if<std::uint64_t>(&c)) return std::to_string(*u);
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    return std::get<std::string>(c);
}

nlohmann::ordered_json to_json(const Cell& c) {
    if (const auto* l = std::get_if<long>(&c)) return *l;
    if (const auto* u = std::get_if<std::uint64_t>(&c)) return *u;
    if (const auto* d = std::get_if<double>(&c)) return *d;
    return std::get<std::string>(c);
}

void write_table(const Table& table, const RunConfig& cfg, const std::string& subcommand, std::ostream& os) {
    if (cfg.format == "json") {
        nlohmann::ordered_json doc;
        doc["metadata"]["tool"] = "hbm";
        doc["metadata"]["version"] = HBM_VERSION;
        auto& echo = doc["metadata"]["config"];
        echo["subcommand"] = subcommand;
        echo["d"] = cfg.dimensions;
        if (!cfg.times.empty()) echo["t"] = cfg.times;
        if (!cfg.t_log_range.empty()) echo["t_log_range"] = cfg.t_log_range;
        if (!cfg.xs.empty()) echo["x"] = cfg.xs;
        if (!cfg.x_range.empty()) echo["x_range"] = cfg.x_range;
        if (!cfg.radii.empty()) echo["r"] = cfg.radii;
        if (subcommand == "simulate") {
            echo["paths"] = cfg.paths;
            echo["step"] = cfg.step;
            echo["seed"] = cfg.seed;
            echo["r0"] = cfg.r0;
            echo["scheme"] = cfg.scheme;
        }
        if (cfg.abs_tol) echo["abs_tol"] = *cfg.abs_tol;
        if (cfg.rel_tol) echo["rel_tol"] = *cfg.rel_tol;
        doc["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) {
            nlohmann::ordered_json obj;
            for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = to_json(row[i]);
            doc["rows"].push_back(std::move(obj));
        }
        os << doc.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << to_text(row[i]);
        os << '\n';
    }
}

QuadratureSpec quadrature_spec(const RunConfig& cfg) {
    QuadratureSpec spec;
    if (cfg.abs_tol) spec.abs_tol = *cfg.abs_tol;
    if (cfg.rel_tol) spec.rel_tol = *cfg.rel_tol;
    spec.validate();
    return spec;
}

std::vector<int> required_dimensions(const RunConfig& cfg) {
    if (cfg.dimensions.empty()) throw std::invalid_argument("--d is required");
    return parse_dimensions(cfg.dimensions);
}

std::vector<double> required_times(const RunConfig& cfg) {
    std::vector<double> t = cfg.times;
    if (!cfg.t_log_range.empty()) {
        const auto r = parse_log_range(cfg.t_log_range);
        t.insert(t.end(), r.begin(), r.end());
    }
    if (t.empty()) throw std::invalid_argument("--t or --t-log-range is required");
    return t;
}

std::vector<double> required_xs(const RunConfig& cfg) {
    std::vector<double> x = cfg.xs;
    if (!cfg.x_range.empty()) {
        const auto r = parse_linear_range(cfg.x_range);
        x.insert(x.end(), r.begin(), r.end());
    }
    if (x.empty()) throw std::invalid_argument("--x or --x-range is required");
    return x;
}

Table kernel_table(const RunConfig& cfg, bool density) {
    if (cfg.radii.empty()) throw std::invalid_argument("--r is required");
    const auto spec = quadrature_spec(cfg);
    Table table;
    table.columns = density ? std::vector<std::string>{"d", "t", "r", "value"}
                            : std::vector<std::string>{"d", "t", "r", "value", "log_value"};
    for (int d : required_dimensions(cfg)) {
        for (double t : required_times(cfg)) {
            for (double r : cfg.radii) {
                const EvaluationPoint p{t, r};
                p.validate();
                if (density) {
                    table.rows.push_back({long{d}, t, r, radial_density(Dimension(d), p, spec)});
                } else {
                    const LogValue q = heat_kernel(Dimension(d), p, spec);
                    table.rows.push_back({long{d}, t, r, q.value(), q.log_magnitude()});
                }
            }
        }
    }
    return table;
}

Table tail_table(const RunConfig& cfg) {
    const auto spec = quadrature_spec(cfg);
    if (cfg.method != "reduction" && cfg.method != "direct") {
        throw std::invalid_argument("--method must be reduction or direct");
    }
    Table table;
    table.columns = {"d", "t", "x", "value", "error_estimate", "method"};
    for (int d : required_dimensions(cfg)) {
        for (double t : required_times(cfg)) {
            for (double x : required_xs(cfg)) {
                const TailEstimate e = cfg.method == "direct" ? direct_kernel_quadrature(Dimension(d), t, x, spec)
                                                              : tail(Dimension(d), t, x, spec);
                table.rows.push_back({long{d}, t, x, e.value, e.error_estimate, std::string(to_string(e.method))});
            }
        }
    }
    return table;
}

Table sweep_table(const RunConfig& cfg) {
    DiscrepancySearch search;
    search.spec = quadrature_spec(cfg);
    Table table;
    table.columns = {"d", "t", "delta", "argmax_x", "evaluations"};
    for (int d : required_dimensions(cfg)) {
        auto times = required_times(cfg);
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
        const DiscrepancyCurve curve = discrepancy_curve(Dimension(d), times, search);
        for (const auto& r : curve.records()) table.rows.push_back({long{d}, r.t, r.delta, r.argmax_x, r.evaluations});
    }
    return table;
}

Table simulate_table(const RunConfig& cfg) {
    Scheme scheme = Scheme::squared_radius;
    if (cfg.scheme == "radial") {
        scheme = Scheme::radial;
    } else if (cfg.scheme != "squared-radius") {
        throw std::invalid_argument("--scheme must be radial or squared-radius");
    }
    const std::vector<double> xs = cfg.xs.empty() && cfg.x_range.empty() ? std::vector<double>{0.0} : required_xs(cfg);
    Table table;
    table.columns = {"d", "t", "x", "estimate", "standard_error", "paths", "seed"};
    for (int d : required_dimensions(cfg)) {
        for (double t : required_times(cfg)) {
            SimulationConfig sim{Dimension(d), t, cfg.step, cfg.paths, cfg.seed, cfg.r0, scheme};
            const SimulationResult res = simulate_radial(sim);
            for (double x : xs) {
                const EmpiricalTail e = empirical_tail(res.samples, Dimension(d), t, x);
                table.rows.push_back({long{d}, t, x, e.estimate, e.standard_error, e.paths, cfg.seed});
            }
        }
    }
    return table;
}

int verify(const RunConfig& cfg, std::ostream& out) {
    VerifyOptions options;
    if (!cfg.dimensions.empty()) options.dimensions = parse_dimensions(cfg.dimensions);
    options.times = cfg.times;
    if (!cfg.t_log_range.empty()) {
        const auto r = parse_log_range(cfg.t_log_range);
        options.times.insert(options.times.end(), r.begin(), r.end());
    }
    options.spec = quadrature_spec(cfg);
    const auto results = run_suite(cfg.suite, options);
    std::size_t failed = 0;
    for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        failed += r.passed ? 0 : 1;
    }
    out << cfg.suite << ": " << results.size() - failed << "/" << results.size() << " passed\n";
    return failed == 0 ? 0 : 1;
}

void add_grid_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--d", cfg.dimensions, "dimension(s): 3, 2,3,5 or 2..7");
    sub->add_option("--t", cfg.times, "time(s)")->delimiter(',');
    sub->add_option("--t-log-range", cfg.t_log_range, "lo:hi:count, log-spaced times");
}

void add_x_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--x", cfg.xs, "normalized deviation(s)")->delimiter(',');
    sub->add_option("--x-range", cfg.x_range, "lo:hi:step");
}

void add_quadrature_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--abs-tol", cfg.abs_tol, "absolute quadrature tolerance");
    sub->add_option("--rel-tol", cfg.rel_tol, "relative quadrature tolerance");
}

void add_output_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--out", cfg.out_path, "output file (default: standard output)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

std::vector<int> parse_dimensions(std::string_view text) {
    std::vector<int> dims;
    if (const auto dots = text.find(".."); dots != std::string_view::npos) {
        const int lo = parse_int(text.substr(0, dots));
        const int hi = parse_int(text.substr(dots + 2));
        if (hi < lo) throw std::invalid_argument("empty dimension range");
        for (int d = lo; d <= hi; ++d) dims.push_back(d);
    } else {
        for (auto part : split(text, ',')) dims.push_back(parse_int(part));
    }
    for (int d : dims) static_cast<void>(Dimension(d));
    return dims;
}

std::vector<double> parse_log_range(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("log range must be lo:hi:count");
    const double lo = parse_double(parts[0]);
    const double hi = parse_double(parts[1]);
    const int count = parse_int(parts[2]);
    if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw std::invalid_argument("log range needs 0 < lo <= hi, count >= 1");
    if (count == 1) return {lo};
    std::vector<double> v;
    for (int i = 0; i < count; ++i) {
        v.push_back(i == count - 1 ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    }
    return v;
}

std::vector<double> parse_linear_range(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("range must be lo:hi:step");
    const double lo = parse_double(parts[0]);
    const double hi = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("range needs lo <= hi and step > 0");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 1'000'000) throw std::invalid_argument("range has too many points");
    std::vector<double> v;
    for (long i = 0; i < count; ++i) v.push_back(lo + i * step);
    return v;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Brownian motion on hyperbolic space: heat kernels, radial tails, Berry-Esseen sweeps", "hbm"};
    app.set_version_flag("--version", std::string(HBM_VERSION));
    app.require_subcommand(1);
    RunConfig cfg;

    auto* kernel = app.add_subcommand("kernel", "heat kernel q_d(t, r)");
    auto* density = app.add_subcommand("density", "radial density omega_d q_d sinh^{d-1}");
    auto* tail_cmd = app.add_subcommand("tail", "tail of the normalized fluctuation");
    auto* sweep = app.add_subcommand("sweep", "sup-distance to the normal tail over t");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo tail estimates");
    auto* verify_cmd = app.add_subcommand("verify", "run a self-check suite");

    for (auto* sub : {kernel, density, tail_cmd, sweep, simulate, verify_cmd}) {
        add_grid_options(sub, cfg);
        add_quadrature_options(sub, cfg);
    }
    for (auto* sub : {kernel, density, tail_cmd, sweep, simulate}) add_output_options(sub, cfg);
    for (auto* sub : {kernel, density}) sub->add_option("--r", cfg.radii, "radius/radii")->delimiter(',');
    for (auto* sub : {tail_cmd, simulate}) add_x_options(sub, cfg);
    tail_cmd->add_option("--method", cfg.method, "reduction (default) or direct");
    simulate->add_option("--paths", cfg.paths, "number of paths");
    simulate->add_option("--step", cfg.step, "Euler step");
    simulate->add_option("--seed", cfg.seed, "64-bit seed");
    simulate->add_option("--r0", cfg.r0, "starting radius");
    simulate->add_option("--scheme", cfg.scheme, "squared-radius (default) or radial");
    verify_cmd->add_option("suite", cfg.suite, "identities | normalization | millson | davies | cross-oracle")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << HBM_VERSION << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (verify_cmd->parsed()) {
            if (!is_suite(cfg.suite)) {
                err << "error: unknown suite '" << cfg.suite << "'\n";
                return 2;
            }
            return verify(cfg, out);
        }
        Table table;
        std::string name;
        if (kernel->parsed()) {
            table = kernel_table(cfg, false);
            name = "kernel";
        } else if (density->parsed()) {
            table = kernel_table(cfg, true);
            name = "density";
        } else if (tail_cmd->parsed()) {
            table = tail_table(cfg);
            name = "tail";
        } else if (sweep->parsed()) {
            table = sweep_table(cfg);
            name = "sweep";
        } else {
            table = simulate_table(cfg);
            name = "simulate";
        }
        if (cfg.out_path.empty()) {
            write_table(table, cfg, name, out);
        } else {
            std::ofstream file(cfg.out_path, std::ios::binary);
            if (!file) {
                err << "error: cannot open " << cfg.out_path << '\n';
                return 2;
            }
            write_table(table, cfg, name, file);
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace hbm::cli
