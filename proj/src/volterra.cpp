#include "deconv/volterra.hpp"

#include <chrono>
#include <cmath>

#include "deconv/errors.hpp"
#include "deconv/quadrature.hpp"

namespace deconv {

namespace {

SecondKindSystem finish_system(Grid grid, LowerTri s) {
    SecondKindSystem sys{grid, std::move(s)};
    double mind = 1.0 + sys.s.at(0, 0);
    for (std::size_t i = 1; i < sys.s.dim(); ++i)
        mind = std::min(mind, 1.0 + sys.s.at(i, i));
    sys.min_diag = mind;
    sys.conditioning_warning = mind < 0.5;
    return sys;
}

} // namespace

SecondKindSystem build_smooth_S(const KernelSpec& k, const Grid& grid, int fine_factor) {
    const SmoothKernel& sk = k.smooth_part();
    // normalized problem: k(0) = 1, so S integrates k'/k0 against u
    const double k0 = sk.k0;
    auto psi = [kp = sk.k_prime, k0](double t) { return kp(t) / k0; };
    ConvWeights w = conv_weights(psi, nullptr, grid, fine_factor);
    return finish_system(grid, std::move(w.w));
}

SecondKindSystem build_singular_S(const KernelSpec& k, const Grid& grid, int fine_factor) {
    const SingularKernel& sk = k.singular_part();
    ConvWeights abel = abel_weights(sk.gamma, grid);
    abel.w.scale(1.0 / std::tgamma(1.0 - sk.gamma));

    // inner operator v = m(0) u + m' * u
    ConvWeights inner = conv_weights(sk.m_prime, nullptr, grid, fine_factor);
    if (sk.m0 != 0.0)
        for (std::size_t i = 0; i < inner.w.dim(); ++i) inner.w.at(i, i) += sk.m0;

    LowerTri s;
    kernels::matmul(abel.w, inner.w, s);
    return finish_system(grid, std::move(s));
}

GridSignal solve_second_kind(const SecondKindSystem& sys, const GridSignal& g) {
    if (!(g.grid == sys.grid)) throw ConfigError("solve_second_kind: grid mismatch");
    const std::size_t n = sys.s.dim();
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = sys.s.row(i);
        double acc = g.values[i];
        for (std::size_t j = 0; j < i; ++j) acc -= r[j] * u[j];
        const double diag = 1.0 + r[i];
        if (std::abs(diag) < 1e-10)
            throw NumericError("solve_second_kind: near-zero diagonal, system singular");
        u[i] = acc / diag;
    }
    return {sys.grid, std::move(u)};
}

DeconvReport deconvolve(const KernelSpec& k, const GridSignal& f_delta,
                        const RegConfig& cfg, const Grid& grid,
                        const DeconvOptions& opts) {
    using clock = std::chrono::steady_clock;

    DeconvReport rep("deconv", GridSignal(grid, std::vector<double>(grid.node_count(), 0.0)));

    const bool exact_path = static_cast<bool>(opts.exact_f_prime);
    const auto t0 = clock::now();

    GridSignal g = rep.solution; // placeholder, overwritten below
    SecondKindSystem sys{grid, LowerTri(grid.node_count())};
    double h_used = 0.0;

    if (k.is_smooth()) {
        const SmoothKernel& sk = k.smooth_part();
        GridSignal f_norm = f_delta;
        RegConfig cfg_norm = cfg;
        if (sk.k0 != 1.0) {
            // normalized problem: k/k0, f/k0, delta/|k0|, M2/|k0| (h invariant)
            for (double& v : f_norm.values) v /= sk.k0;
            cfg_norm.delta = cfg.delta / std::abs(sk.k0);
            if (cfg_norm.m2) cfg_norm.m2 = *cfg_norm.m2 / std::abs(sk.k0);
            rep.metadata["k0_rescaled"] = std::to_string(sk.k0);
        }
        if (exact_path) {
            // f'/k0 sampled exactly on the solution grid
            g = sample(grid, [&](double t) { return opts.exact_f_prime(t) / sk.k0; });
        } else {
            h_used = cfg_norm.effective_step();
            g = stable_derivative(f_norm, cfg_norm, grid);
        }
        sys = build_smooth_S(k, grid, opts.fine_factor);
    } else {
        const SingularKernel& sk = k.singular_part();
        if (exact_path) {
            g = abel_inverse_exact(opts.exact_f_prime, sk.gamma, grid, opts.fine_factor);
        } else {
            h_used = cfg.effective_step();
            g = fractional_regularizer(f_delta, sk.gamma, cfg, grid, opts.fractional_mode);
            rep.metadata["fractional_mode"] =
                opts.fractional_mode == FractionalMode::integrate_then_diff
                    ? "integrate_then_diff"
                    : "diff_then_integrate";
        }
        sys = build_singular_S(k, grid, opts.fine_factor);
    }

    GridSignal u = solve_second_kind(sys, g);
    const auto t1 = clock::now();
    rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    if (!exact_path) {
        rep.h_used = h_used;
        if (cfg.delta > 0.0 && h_used > 0.0)
            rep.metadata["implied_m2"] = std::to_string(2.0 * cfg.delta / (h_used * h_used));
        rep.metadata["boundary_layer"] = "[0,h) and (T-h,T] clamped to nearest interior";
    } else {
        rep.metadata["derivative"] = "exact";
    }
    if (sys.conditioning_warning)
        rep.metadata["conditioning_warning"] =
            "min diagonal of I+S is " + std::to_string(sys.min_diag);

    // residuals against f_delta on the solution grid
    const GridSignal fwd = forward_convolve(k, u, opts.fine_factor);
    const GridSignal f_on_grid = sample(grid, [&](double t) { return eval_interp(f_delta, t); });
    double rsup = 0.0, racc = 0.0;
    for (std::size_t i = 0; i < fwd.values.size(); ++i) {
        const double d = fwd.values[i] - f_on_grid.values[i];
        rsup = std::max(rsup, std::abs(d));
        racc += d * d;
    }
    rep.residual_sup = rsup;
    rep.residual_l2 = std::sqrt(racc * grid.spacing());
    rep.solution = std::move(u);
    return rep;
}

} // namespace deconv
