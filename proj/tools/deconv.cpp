// Command-line front end: forward data generation, deconvolution runs and
// step sweeps driven by a flat key=value config file.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "deconv/csv.hpp"
#include "deconv/experiments.hpp"
#include "deconv/svg.hpp"

namespace fs = std::filesystem;
using namespace deconv;

namespace {

struct RunConfig {
    std::string problem = "exp";
    double delta = 0.1;
    int n = 10;
    std::optional<double> h;
    std::optional<double> m2;
    std::optional<double> gamma;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    Method method = Method::both;
    fs::path output_dir = "out";
    std::vector<double> h_list;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ConfigError("config: bad numeric value '" + v + "' for key '" + key + "'");
    }
}

std::vector<std::uint64_t> parse_seeds(const std::string& v) {
    std::vector<std::uint64_t> seeds;
    for (const std::string& item : split(v, ',')) {
        if (item.empty()) continue;
        try {
            seeds.push_back(std::stoull(item));
        } catch (...) {
            throw ConfigError("config: bad seed '" + item + "'");
        }
    }
    if (seeds.empty()) throw ConfigError("config: empty seed list");
    return seeds;
}

std::vector<double> parse_h_list(const std::string& v) {
    std::vector<double> hs;
    for (const std::string& item : split(v, ','))
        if (!item.empty()) hs.push_back(to_double(item, "h_list"));
    return hs;
}

RunConfig parse_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "problem") cfg.problem = value;
        else if (key == "delta") cfg.delta = to_double(value, key);
        else if (key == "n") cfg.n = static_cast<int>(to_double(value, key));
        else if (key == "h") cfg.h = to_double(value, key);
        else if (key == "m2") cfg.m2 = to_double(value, key);
        else if (key == "gamma") cfg.gamma = to_double(value, key);
        else if (key == "seeds") cfg.seeds = parse_seeds(value);
        else if (key == "method") {
            if (value == "deconv") cfg.method = Method::deconv;
            else if (value == "tikhonov") cfg.method = Method::tikhonov;
            else if (value == "both") cfg.method = Method::both;
            else throw ConfigError("config: unknown method '" + value + "'");
        } else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "h_list") cfg.h_list = parse_h_list(value);
        else throw ConfigError("config: unknown key '" + key + "'");
    }
    return cfg;
}

// problem = exp | exp(a) | abel | abel(g) | abel(g)+poly(c0,c1,c2)
TestProblem build_problem(const RunConfig& cfg) {
    const std::string& spec = cfg.problem;
    auto args_of = [](const std::string& s, std::size_t open) {
        const auto close = s.find(')', open);
        if (close == std::string::npos) throw ConfigError("config: unbalanced '(' in problem");
        return s.substr(open + 1, close - open - 1);
    };

    if (spec == "exp") return make_exp_problem();
    if (spec.rfind("exp(", 0) == 0) return make_exp_problem(to_double(args_of(spec, 3), "a"));

    if (spec == "abel") {
        if (!cfg.gamma) throw ConfigError("config: singular kernel needs gamma");
        return make_abel_problem(*cfg.gamma);
    }
    if (spec.rfind("abel(", 0) == 0) {
        const double g = to_double(args_of(spec, 4), "gamma");
        std::array<double, 3> poly{0.0, 0.0, 1.0};
        if (const auto plus = spec.find("+poly("); plus != std::string::npos) {
            const auto cs = split(args_of(spec, plus + 5), ',');
            if (cs.size() != 3) throw ConfigError("config: poly needs three coefficients");
            for (int i = 0; i < 3; ++i) poly[static_cast<std::size_t>(i)] = to_double(cs[static_cast<std::size_t>(i)], "poly");
        }
        return make_abel_problem(g, poly);
    }
    throw ConfigError("config: unknown problem '" + spec + "'");
}

RunOptions run_options(const RunConfig& cfg) {
    RunOptions opts;
    opts.method = cfg.method;
    opts.h = cfg.h;
    opts.m2 = cfg.m2;
    return opts;
}

std::string cell(const std::optional<double>& v) {
    return v ? csv::format_double(*v) : std::string{};
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir.string());
}

int cmd_forward(const RunConfig& cfg) {
    const TestProblem p = build_problem(cfg);
    ensure_dir(cfg.output_dir);
    csv::write_signal(cfg.output_dir / "f.csv", make_data(p, 0.0, cfg.n, 0));
    for (std::uint64_t seed : cfg.seeds)
        csv::write_signal(cfg.output_dir / ("f_delta_" + std::to_string(seed) + ".csv"),
                          make_data(p, cfg.delta, cfg.n, seed));
    return 0;
}

void write_report_csv(const fs::path& path, const ComparisonTable& table, int n) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : table.rows) {
        for (const MethodRun* run : {&row.deconv, &row.tikhonov}) {
            if (!run->report) continue;
            const DeconvReport& r = *run->report;
            rows.push_back({r.method, std::to_string(row.seed), std::to_string(n),
                            csv::format_double(r.h_used), cell(r.eps_used), cell(r.rel_l2),
                            cell(r.sup_err), csv::format_double(r.residual_l2),
                            csv::format_double(r.wall_ms)});
        }
    }
    csv::write_table(path,
                     {"method", "seed", "n", "h", "eps", "rel_l2", "sup_err", "residual_l2",
                      "wall_ms"},
                     rows);
}

svg::Series series_of(const GridSignal& s, const std::string& label) {
    svg::Series out{label, {}};
    for (std::size_t i = 0; i < s.values.size(); ++i)
        out.points.emplace_back(s.grid.node(i), s.values[i]);
    return out;
}

int cmd_solve(const RunConfig& cfg) {
    const TestProblem p = build_problem(cfg);
    ensure_dir(cfg.output_dir);

    const ComparisonTable table = run_comparison(p, cfg.delta, cfg.n, cfg.seeds, run_options(cfg));

    bool all_ok = true;
    for (const auto& row : table.rows) {
        for (const MethodRun* run : {&row.deconv, &row.tikhonov}) {
            if (!run->ok && !run->error.empty()) {
                std::cerr << "run failed (seed " << row.seed << "): " << run->error << "\n";
                all_ok = false;
            }
            if (!run->report) continue;
            const DeconvReport& r = *run->report;
            csv::write_signal(cfg.output_dir /
                                  ("u_" + r.method + "_" + std::to_string(row.seed) + ".csv"),
                              r.solution);
            std::cout << r.method << ' ' << row.seed << ' '
                      << (r.rel_l2 ? csv::format_double(*r.rel_l2) : "-") << ' ' << r.wall_ms
                      << "\n";
        }
    }
    write_report_csv(cfg.output_dir / "report.csv", table, cfg.n);

    // overlay for the first seed, mirroring the paper-style solution figure
    std::vector<svg::Series> series;
    const ComparisonRow& first = table.rows.front();
    const Grid sol_grid = solution_grid(p, cfg.n);
    if (p.u_exact) series.push_back(series_of(sample(sol_grid, p.u_exact), "u_exact"));
    if (first.deconv.report)
        series.push_back(series_of(first.deconv.report->solution, "u_deconv"));
    if (first.tikhonov.report)
        series.push_back(series_of(first.tikhonov.report->solution, "u_disc"));
    if (!series.empty())
        svg::write_line_plot(cfg.output_dir / "solution.svg",
                             "reconstruction, seed " + std::to_string(first.seed), "t", "u(t)",
                             series);
    if (!all_ok) throw NumericError("one or more runs failed");
    return 0;
}

int cmd_sweep(const RunConfig& cfg, std::vector<double> h_list) {
    if (h_list.empty()) h_list = cfg.h_list;
    if (h_list.empty()) throw ConfigError("sweep: empty h list");
    const TestProblem p = build_problem(cfg);
    for (double h : h_list)
        if (!(h > 0.0 && h < 0.5 * p.t_end))
            throw ConfigError("sweep: every h must lie in (0, T/2)");
    ensure_dir(cfg.output_dir);

    const std::uint64_t seed = cfg.seeds.front();
    RunOptions opts = run_options(cfg);
    opts.method = Method::deconv;
    const auto rows = sweep_h(p, cfg.delta, cfg.n, h_list, seed, opts);

    std::optional<DeconvReport> baseline;
    if (cfg.method != Method::deconv) {
        const GridSignal f_delta = make_data(p, cfg.delta, cfg.n, seed);
        baseline = run_tikhonov(p, f_delta, cfg.delta, cfg.n, opts);
    }

    bool all_ok = true;
    std::vector<std::vector<std::string>> table;
    svg::Series rel_deconv{"rel_l2 deconv", {}}, res_deconv{"residual deconv", {}};
    svg::Series rel_tikh{"rel_l2 tikhonov", {}}, res_tikh{"residual tikhonov", {}};
    for (const auto& row : rows) {
        if (!row.run.ok) {
            std::cerr << "sweep cell h=" << row.h << " failed: " << row.run.error << "\n";
            all_ok = false;
            continue;
        }
        const DeconvReport& r = *row.run.report;
        table.push_back({csv::format_double(row.h), "deconv", cell(r.rel_l2),
                         csv::format_double(r.residual_l2)});
        if (r.rel_l2) rel_deconv.points.emplace_back(row.h, *r.rel_l2);
        res_deconv.points.emplace_back(row.h, r.residual_l2);
        if (baseline) {
            table.push_back({csv::format_double(row.h), "tikhonov", cell(baseline->rel_l2),
                             csv::format_double(baseline->residual_l2)});
            if (baseline->rel_l2) rel_tikh.points.emplace_back(row.h, *baseline->rel_l2);
            res_tikh.points.emplace_back(row.h, baseline->residual_l2);
        }
    }
    csv::write_table(cfg.output_dir / "sweep.csv", {"h", "method", "rel_l2", "residual_l2"},
                     table);

    std::vector<svg::Series> series{rel_deconv, res_deconv};
    if (baseline) {
        series.push_back(rel_tikh);
        series.push_back(res_tikh);
    }
    if (rel_deconv.points.size() > 1)
        svg::write_line_plot(cfg.output_dir / "sweep.svg", "step sensitivity", "h", "error",
                             series);
    if (!all_ok) throw NumericError("one or more sweep cells failed");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stable Volterra deconvolution: kernel-split method and Tikhonov baseline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override, seeds_override, h_list_arg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "path to key = value config file")->required();
        sub->add_option("--out", out_override, "output directory (overrides config)");
        sub->add_option("--seeds", seeds_override, "comma-separated seed list (overrides config)");
    };
    CLI::App* fwd = app.add_subcommand("forward", "write clean and noisy data CSVs");
    add_common(fwd);
    CLI::App* solve = app.add_subcommand("solve", "run the requested methods and write reports");
    add_common(solve);
    CLI::App* sweep = app.add_subcommand("sweep", "run a differentiation-step sweep");
    add_common(sweep);
    sweep->add_option("--h-list", h_list_arg, "comma-separated step values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        RunConfig cfg = parse_config(config_path);
        if (!out_override.empty()) cfg.output_dir = out_override;
        if (!seeds_override.empty()) cfg.seeds = parse_seeds(seeds_override);

        if (app.got_subcommand(fwd)) return cmd_forward(cfg);
        if (app.got_subcommand(solve)) return cmd_solve(cfg);
        return cmd_sweep(cfg, h_list_arg.empty() ? std::vector<double>{}
                                                 : parse_h_list(h_list_arg));
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
