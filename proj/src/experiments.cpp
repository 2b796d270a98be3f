#include "deconv/experiments.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "deconv/errors.hpp"
#include "deconv/quadrature.hpp"
#include "deconv/runtime.hpp"
#include "deconv/tikhonov.hpp"
#include "deconv/volterra.hpp"

namespace deconv {

TestProblem make_exp_problem(double a, double b) {
    if (a * a + b * b == 0.0) throw ConfigError("make_exp_problem: a and b cannot both be 0");
    auto k = [a](double y) { return std::exp(a * y); };
    auto kp = [a](double y) { return a * std::exp(a * y); };
    const double d = a * a + b * b;
    auto f = [a, b, d](double t) {
        return ((b + a) * (std::exp(a * t) - std::cos(b * t)) + (b - a) * std::sin(b * t)) / d;
    };
    auto fp = [a, b, d](double t) {
        return ((b + a) * (a * std::exp(a * t) + b * std::sin(b * t)) +
                (b - a) * b * std::cos(b * t)) / d;
    };
    auto u = [b](double t) { return std::sin(b * t) + std::cos(b * t); };

    TestProblem p{"exp", KernelSpec::smooth(k, kp), u, f, fp, 1.0, {{"a", a}, {"b", b}}};
    validate_problem(p);
    return p;
}

TestProblem make_abel_problem(double gamma, std::array<double, 3> c) {
    auto m = [c](double t) { return c[0] + t * (c[1] + t * c[2]); };
    auto mp = [c](double t) { return c[1] + 2.0 * c[2] * t; };
    auto u = [](double t) { return 1.0 - t * t; };

    // closed forms for u = 1 - t^2:
    //   fractional part: t^g/Gamma(1+g) - 2 t^{g+2}/Gamma(3+g)
    //   polynomial part: sum_k c_k [ t^{k+1}/(k+1) - 2 t^{k+3}/((k+1)(k+2)(k+3)) ]
    auto f = [c, gamma](double t) {
        double v = std::pow(t, gamma) / std::tgamma(1.0 + gamma) -
                   2.0 * std::pow(t, gamma + 2.0) / std::tgamma(3.0 + gamma);
        for (int k = 0; k < 3; ++k) {
            if (c[k] == 0.0) continue;
            const double k1 = k + 1.0, k2 = k + 2.0, k3 = k + 3.0;
            v += c[k] * (std::pow(t, k1) / k1 - 2.0 * std::pow(t, k3) / (k1 * k2 * k3));
        }
        return v;
    };
    auto fp = [c, gamma](double t) {
        double v = std::pow(t, gamma - 1.0) / std::tgamma(gamma) -
                   2.0 * std::pow(t, gamma + 1.0) / std::tgamma(2.0 + gamma);
        for (int k = 0; k < 3; ++k) {
            if (c[k] == 0.0) continue;
            const double k1 = k + 1.0, k2 = k + 2.0;
            v += c[k] * (std::pow(t, static_cast<double>(k)) -
                         2.0 * std::pow(t, k + 2.0) / (k1 * k2));
        }
        return v;
    };

    TestProblem p{"abel", KernelSpec::singular(gamma, m, mp), u, f, fp, 1.0,
                  {{"gamma", gamma}, {"c0", c[0]}, {"c1", c[1]}, {"c2", c[2]}}};
    validate_problem(p);
    return p;
}

void validate_problem(const TestProblem& p, double tol, int n) {
    const Grid g(p.t_end, n, GridStyle::midpoint);
    const GridSignal f_quad = forward_convolve(p.kernel, sample(g, p.u_exact));
    const GridSignal f_ref = sample(g, p.f_exact);
    double err = 0.0;
    for (std::size_t i = 0; i < f_quad.values.size(); ++i)
        err = std::max(err, std::abs(f_quad.values[i] - f_ref.values[i]));
    if (!(err <= tol))
        throw NumericError("test problem '" + p.name +
                           "' failed the forward self-consistency gate: sup err " +
                           std::to_string(err));
}

Grid solution_grid(const TestProblem& p, int n) { return {p.t_end, n, GridStyle::midpoint}; }

Grid data_grid(const TestProblem& p, int n, int refine) {
    return {p.t_end, n * std::max(refine, 1), GridStyle::endpoint};
}

GridSignal make_noise(const GridSignal& f, const NoiseSpec& spec) {
    if (!(spec.cap > 0.0)) throw ConfigError("make_noise: cap must be positive");
    if (spec.n_components < 1) throw ConfigError("make_noise: need at least one component");
    if (!(spec.freq_lo > 0.0 && spec.freq_hi > spec.freq_lo))
        throw ConfigError("make_noise: invalid frequency range");

    // engine draws mapped to [0,1) by hand so the stream is identical across
    // standard libraries
    std::mt19937_64 eng(spec.seed);
    auto unit = [&eng]() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };

    const double log_lo = std::log(spec.freq_lo);
    const double log_span = std::log(spec.freq_hi) - log_lo;
    std::vector<double> freq(spec.n_components), amp(spec.n_components),
        phase(spec.n_components);
    for (int j = 0; j < spec.n_components; ++j) {
        freq[j] = std::exp(log_lo + unit() * log_span);
        amp[j] = 0.2 + 0.8 * unit();
        phase[j] = 2.0 * pi * unit();
    }

    const std::size_t n = f.grid.node_count();
    std::vector<double> e(n);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = f.grid.node(i);
        double v = 0.0;
        for (int j = 0; j < spec.n_components; ++j) v += amp[j] * std::sin(freq[j] * t + phase[j]);
        e[i] = v;
        max_abs = std::max(max_abs, std::abs(v));
    }
    if (max_abs == 0.0) throw NumericError("make_noise: degenerate perturbation");

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = f.values[i] + (e[i] / max_abs) * spec.cap; // sup hits cap exactly
    return {f.grid, std::move(out)};
}

GridSignal make_data(const TestProblem& p, double delta, int n, std::uint64_t seed,
                     int data_refine) {
    const GridSignal f = sample(data_grid(p, n, data_refine), p.f_exact);
    if (delta <= 0.0) return f;
    return make_noise(f, NoiseSpec{seed, 5, 2.0 * pi, 40.0 * pi, delta});
}

namespace {

RegConfig make_reg_config(double delta, const RunOptions& opts) {
    RegConfig cfg;
    cfg.delta = delta;
    cfg.m2 = opts.m2;
    cfg.h_override = opts.h;
    return cfg;
}

void fill_accuracy(const TestProblem& p, DeconvReport& rep) {
    if (!p.u_exact) return;
    const GridSignal u_ref = sample(rep.solution.grid, p.u_exact);
    rep.rel_l2 = rel_error_l2(rep.solution, u_ref);
    rep.sup_err = rel_error_sup(rep.solution, u_ref);
}

Aggregate aggregate(const std::vector<ComparisonRow>& rows, bool deconv_side) {
    Aggregate a;
    for (const auto& row : rows) {
        const MethodRun& r = deconv_side ? row.deconv : row.tikhonov;
        if (!r.ok || !r.report || !r.report->rel_l2) continue;
        const double v = *r.report->rel_l2;
        if (a.count == 0) {
            a.min_rel_l2 = a.max_rel_l2 = v;
        } else {
            a.min_rel_l2 = std::min(a.min_rel_l2, v);
            a.max_rel_l2 = std::max(a.max_rel_l2, v);
        }
        a.mean_rel_l2 += v;
        ++a.count;
    }
    if (a.count > 0) a.mean_rel_l2 /= a.count;
    return a;
}

MethodRun guarded(const std::function<DeconvReport()>& fn) {
    MethodRun r;
    try {
        r.report = fn();
        r.ok = true;
    } catch (const std::exception& ex) {
        r.error = ex.what();
    }
    return r;
}

} // namespace

DeconvReport run_deconv(const TestProblem& p, const GridSignal& f_delta, double delta,
                        int n, const RunOptions& opts) {
    const Grid grid = solution_grid(p, n);
    DeconvOptions dopts;
    dopts.fine_factor = opts.fine_factor;
    dopts.fractional_mode = opts.fractional_mode;
    if (opts.exact_derivative) {
        if (!p.f_prime)
            throw ConfigError("run_deconv: exact-derivative path needs a closed-form f'");
        dopts.exact_f_prime = p.f_prime;
    }
    DeconvReport rep = deconvolve(p.kernel, f_delta, make_reg_config(delta, opts), grid, dopts);
    fill_accuracy(p, rep);
    return rep;
}

DeconvReport run_tikhonov(const TestProblem& p, const GridSignal& f_delta, double delta,
                          int n, const RunOptions& opts) {
    using clock = std::chrono::steady_clock;
    const Grid grid = solution_grid(p, n);

    const auto t0 = clock::now();
    const ConvWeights K = forward_weights(p.kernel, grid, opts.fine_factor);
    const GridSignal f_sol =
        sample(grid, [&](double t) { return eval_interp(f_delta, t); });
    TikhonovConfig cfg;
    cfg.delta = delta;
    cfg.c_morozov = opts.c_morozov;
    MorozovResult sel = morozov_select(K, f_sol, cfg);
    const auto t1 = clock::now();

    DeconvReport rep("tikhonov", sel.u);
    rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rep.eps_used = sel.eps;
    rep.metadata["stabilizer"] = "identity (zeroth order)";
    rep.metadata["morozov_probes"] = std::to_string(sel.trajectory.size());

    const GridSignal fwd = K.apply(sel.u);
    double rsup = 0.0, racc = 0.0;
    for (std::size_t i = 0; i < fwd.values.size(); ++i) {
        const double d = fwd.values[i] - f_sol.values[i];
        rsup = std::max(rsup, std::abs(d));
        racc += d * d;
    }
    rep.residual_sup = rsup;
    rep.residual_l2 = std::sqrt(racc * grid.spacing());
    fill_accuracy(p, rep);
    return rep;
}

ComparisonTable run_comparison(const TestProblem& p, double delta, int n,
                               const std::vector<std::uint64_t>& seeds,
                               const RunOptions& opts) {
    if (n < 4) throw ConfigError("run_comparison: n must be >= 4");
    ComparisonTable table;
    table.rows.resize(seeds.size());

    const auto count = static_cast<std::ptrdiff_t>(seeds.size());
#pragma omp parallel for schedule(dynamic) num_threads(runtime::max_threads())
    for (std::ptrdiff_t idx = 0; idx < count; ++idx) {
        const std::uint64_t seed = seeds[static_cast<std::size_t>(idx)];
        ComparisonRow row;
        row.seed = seed;
        // both methods consume the same draw
        const GridSignal f_delta = make_data(p, delta, n, seed, opts.data_refine);
        if (opts.method != Method::tikhonov)
            row.deconv = guarded([&] { return run_deconv(p, f_delta, delta, n, opts); });
        if (opts.method != Method::deconv)
            row.tikhonov = guarded([&] { return run_tikhonov(p, f_delta, delta, n, opts); });
        table.rows[static_cast<std::size_t>(idx)] = std::move(row);
    }

    table.deconv = aggregate(table.rows, true);
    table.tikhonov = aggregate(table.rows, false);
    return table;
}

std::vector<SweepRow> sweep_h(const TestProblem& p, double delta, int n,
                              const std::vector<double>& h_values, std::uint64_t seed,
                              const RunOptions& opts) {
    const GridSignal f_delta = make_data(p, delta, n, seed, opts.data_refine);

    std::vector<SweepRow> rows(h_values.size());
    const auto count = static_cast<std::ptrdiff_t>(h_values.size());
#pragma omp parallel for schedule(dynamic) num_threads(runtime::max_threads())
    for (std::ptrdiff_t idx = 0; idx < count; ++idx) {
        RunOptions cell = opts;
        cell.h = h_values[static_cast<std::size_t>(idx)];
        SweepRow row;
        row.h = *cell.h;
        row.run = guarded([&] { return run_deconv(p, f_delta, delta, n, cell); });
        rows[static_cast<std::size_t>(idx)] = std::move(row);
    }
    return rows;
}

} // namespace deconv
