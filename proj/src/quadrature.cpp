#include "deconv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deconv/errors.hpp"

namespace deconv {

namespace {

// tau_a^p - tau_b^p for 0 <= tau_b < tau_a without cancellation.
double pow_diff(double tau_a, double tau_b, double p) {
    const double lead = std::pow(tau_a, p);
    if (tau_b <= 0.0) return lead;
    return lead * (-std::expm1(p * std::log(tau_b / tau_a)));
}

// Closed moments of (t - s)^{-gamma} against the line through (sp, vp), (sq, vq)
// over [sa, sb] subset [0, t].
double abel_segment(double t, double gamma, double sa, double sb, double sp, double sq,
                    double vp, double vq) {
    const double p1 = 1.0 - gamma;
    const double p2 = 2.0 - gamma;
    const double tau_a = t - sa;
    const double tau_b = t - sb;
    const double m0 = pow_diff(tau_a, tau_b, p1) / p1;
    const double m1 = t * m0 - pow_diff(tau_a, tau_b, p2) / p2;
    if (sp == sq) return vp * m0;
    const double inv_d = 1.0 / (sq - sp);
    return vp * (sq * m0 - m1) * inv_d + vq * (m1 - sp * m0) * inv_d;
}

} // namespace

GridSignal ConvWeights::apply(const GridSignal& v) const {
    if (!(v.grid == grid)) throw ConfigError("ConvWeights::apply: grid mismatch");
    std::vector<double> y(v.values.size());
    kernels::apply(w, v.values, y);
    return {grid, std::move(y)};
}

double corrected_trapezoid(const std::function<double(double)>& g,
                           std::pair<double, double> g_prime_ends, double a, double b,
                           int n) {
    if (!(b > a)) throw ConfigError("corrected_trapezoid: requires b > a");
    if (n < 1) throw ConfigError("corrected_trapezoid: requires n >= 1");
    const double h = (b - a) / n;
    double acc = 0.5 * (g(a) + g(b));
    for (int m = 1; m < n; ++m) acc += g(a + h * m);
    return h * acc + h * h / 12.0 * (g_prime_ends.first - g_prime_ends.second);
}

ConvWeights conv_weights(const std::function<double(double)>& psi,
                         const std::function<double(double)>& psi_prime, const Grid& grid,
                         int fine_factor) {
    kernels::ConvRowSpec spec{psi, psi_prime, fine_factor};
    LowerTri w;
    kernels::conv_rows(grid, spec, w);
    return {grid, std::move(w)};
}

ConvWeights abel_weights(double gamma, const Grid& grid) {
    LowerTri w;
    kernels::abel_rows(grid, gamma, w);
    return {grid, std::move(w)};
}

ConvWeights forward_weights(const KernelSpec& k, const Grid& grid, int fine_factor) {
    if (k.is_smooth()) {
        const SmoothKernel& sk = k.smooth_part();
        return conv_weights(sk.k, sk.k_prime, grid, fine_factor);
    }
    const SingularKernel& sk = k.singular_part();
    ConvWeights abel = abel_weights(1.0 - sk.gamma, grid);
    abel.w.scale(1.0 / std::tgamma(sk.gamma));
    ConvWeights smooth = conv_weights(sk.m, sk.m_prime, grid, fine_factor);
    abel.w += smooth.w;
    return abel;
}

GridSignal forward_convolve(const KernelSpec& k, const GridSignal& u, int fine_factor) {
    return forward_weights(k, u.grid, fine_factor).apply(u);
}

double abel_prefix_integral(const GridSignal& s, double gamma, double tau) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ConfigError("abel_prefix_integral: gamma must lie in (0, 1)");
    const Grid& g = s.grid;
    const double T = g.t_end();
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * T;
    if (tau < -slack || tau > T + slack)
        throw ConfigError("abel_prefix_integral: tau outside [0, T]");
    tau = std::clamp(tau, 0.0, T);
    if (tau == 0.0) return 0.0;

    const std::size_t n = g.node_count();
    double acc = 0.0;
    auto add = [&](double sa, double sb, std::size_t p, std::size_t q) {
        sa = std::min(sa, tau);
        sb = std::min(sb, tau);
        if (sb <= sa) return;
        acc += abel_segment(tau, gamma, sa, sb, g.node(p), g.node(q), s.values[p],
                            s.values[q]);
    };

    if (g.style() == GridStyle::endpoint) {
        for (std::size_t j = 0; j + 1 < n && g.node(j) < tau; ++j)
            add(g.node(j), g.node(j + 1), j, j + 1);
        return acc;
    }
    // midpoint: constant margins at both ends, matching eval_interp
    add(0.0, g.node(0), 0, 0);
    for (std::size_t j = 0; j + 1 < n && g.node(j) < tau; ++j)
        add(g.node(j), g.node(j + 1), j, j + 1);
    if (tau > g.node(n - 1)) add(g.node(n - 1), tau, n - 1, n - 1);
    return acc;
}

GridSignal abel_inverse_exact(const std::function<double(double)>& f_prime, double gamma,
                              const Grid& out, int fine_factor) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ConfigError("abel_inverse_exact: gamma must lie in (0, 1)");
    if (fine_factor < 1) throw ConfigError("abel_inverse_exact: fine factor must be >= 1");
    const double T = out.t_end();
    const int n = out.cells();

    // refined endpoint grid that contains every output node
    const std::size_t cells = static_cast<std::size_t>(2 * n) * fine_factor;
    const double step = T / static_cast<double>(cells);
    auto fine_index = [&](std::size_t i) {
        return out.style() == GridStyle::midpoint
                   ? (2 * i + 1) * static_cast<std::size_t>(fine_factor)
                   : 2 * i * static_cast<std::size_t>(fine_factor);
    };

    // strength of the s^{gamma-1} component of f' at the origin
    const double s0 = T * 1e-8;
    const double c = std::pow(s0, 1.0 - gamma) * f_prime(s0);

    std::vector<double> r(cells + 1);
    r[0] = 0.0;
    for (std::size_t j = 1; j <= cells; ++j) {
        const double s = step * static_cast<double>(j);
        r[j] = f_prime(s) - c * std::pow(s, gamma - 1.0);
    }

    const double g1 = std::tgamma(1.0 - gamma);
    std::vector<double> vals(out.node_count());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const std::size_t m = fine_index(i);
        const double t = step * static_cast<double>(m);
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double sa = step * static_cast<double>(j);
            const double sb = step * static_cast<double>(j + 1);
            acc += abel_segment(t, gamma, sa, sb, sa, sb, r[j], r[j + 1]);
        }
        // int_0^t s^{gamma-1} (t-s)^{-gamma} ds = Beta(gamma, 1-gamma), any t > 0
        vals[i] = c * std::tgamma(gamma) + acc / g1;
    }
    return {out, std::move(vals)};
}

} // namespace deconv
