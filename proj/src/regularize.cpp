#include "deconv/regularize.hpp"

#include <algorithm>
#include <cmath>

#include "deconv/errors.hpp"
#include "deconv/quadrature.hpp"

namespace deconv {

double optimal_step(double delta, double m2) {
    if (!(m2 > 0.0)) throw ConfigError("optimal_step: m2 must be positive");
    if (delta < 0.0) throw ConfigError("optimal_step: delta must be >= 0");
    return std::sqrt(2.0 * delta / m2);
}

double RegConfig::effective_step() const {
    if (h_override) {
        if (!(*h_override > 0.0)) throw ConfigError("RegConfig: h override must be positive");
        return *h_override;
    }
    if (!m2) throw ConfigError("RegConfig: either h or m2 must be given");
    return optimal_step(delta, *m2);
}

double RegConfig::implied_m2() const {
    const double h = effective_step();
    if (!(h > 0.0)) throw ConfigError("RegConfig: step is zero; supply h override");
    return 2.0 * delta / (h * h);
}

namespace {

double checked_step(const RegConfig& cfg, double t_end) {
    const double h = cfg.effective_step();
    if (!(h > 0.0))
        throw ConfigError("stable_derivative: step is zero (delta = 0 without h override)");
    if (!(h < 0.5 * t_end))
        throw ConfigError("stable_derivative: step h must be smaller than T/2");
    return h;
}

} // namespace

GridSignal stable_derivative(const GridSignal& f_delta, const RegConfig& cfg,
                             const Grid& out) {
    const double T = f_delta.grid.t_end();
    if (std::abs(out.t_end() - T) > 1e-12 * T)
        throw ConfigError("stable_derivative: data and output grids disagree on T");
    const double h = checked_step(cfg, T);

    std::vector<double> vals(out.node_count());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double t = std::clamp(out.node(i), h, T - h);
        vals[i] = (eval_interp(f_delta, t + h) - eval_interp(f_delta, t - h)) / (2.0 * h);
    }
    return {out, std::move(vals)};
}

GridSignal fractional_regularizer(const GridSignal& f_delta, double gamma,
                                  const RegConfig& cfg, const Grid& out,
                                  FractionalMode mode) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ConfigError("fractional_regularizer: gamma must lie in (0, 1)");
    const double T = f_delta.grid.t_end();
    if (std::abs(out.t_end() - T) > 1e-12 * T)
        throw ConfigError("fractional_regularizer: data and output grids disagree on T");
    const double g1 = std::tgamma(1.0 - gamma);

    if (mode == FractionalMode::diff_then_integrate) {
        const GridSignal d = stable_derivative(f_delta, cfg, out);
        GridSignal y = abel_weights(gamma, out).apply(d);
        for (double& v : y.values) v /= g1;
        return y;
    }

    // difference the fractional integral F(tau) = J^{1-gamma} f_delta(tau),
    // which is smooth even when f' blows up at the origin
    const double h = checked_step(cfg, T);
    std::vector<double> vals(out.node_count());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double t = std::clamp(out.node(i), h, T - h);
        const double fp = abel_prefix_integral(f_delta, gamma, t + h);
        const double fm = abel_prefix_integral(f_delta, gamma, t - h);
        vals[i] = (fp - fm) / (2.0 * h * g1);
    }
    return {out, std::move(vals)};
}

} // namespace deconv
