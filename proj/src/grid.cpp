#include "deconv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace deconv {

Grid::Grid(double t_end, int cells, GridStyle style)
    : t_end_(t_end), cells_(cells), style_(style) {
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw ConfigError("Grid: t_end must be positive and finite");
    if (cells < 1)
        throw ConfigError("Grid: cell count must be >= 1");
}

double Grid::node(std::size_t i) const {
    const double dt = spacing();
    if (style_ == GridStyle::midpoint)
        return (2.0 * static_cast<double>(i) + 1.0) * 0.5 * dt;
    return static_cast<double>(i) * dt;
}

std::vector<double> Grid::nodes() const {
    std::vector<double> out(node_count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = node(i);
    return out;
}

GridSignal::GridSignal(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.node_count())
        throw ConfigError("GridSignal: value count " + std::to_string(values.size()) +
                          " does not match grid node count " +
                          std::to_string(grid.node_count()));
}

GridSignal sample(const Grid& g, const std::function<double(double)>& f) {
    std::vector<double> v(g.node_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.node(i));
    return {g, std::move(v)};
}

double eval_interp(const GridSignal& s, double t) {
    const Grid& g = s.grid;
    const double T = g.t_end();
    // Tolerate boundary roundoff from stencil arithmetic like (t - h) at t == h.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * T;
    if (t < -slack || t > T + slack)
        throw ConfigError("eval_interp: t outside [0, T]");
    t = std::clamp(t, 0.0, T);

    const std::size_t n = g.node_count();
    const double first = g.node(0);
    const double last = g.node(n - 1);
    if (t <= first) return s.values.front();
    if (t >= last) return s.values.back();

    const double dt = g.spacing();
    auto idx = static_cast<std::size_t>((t - first) / dt);
    if (idx >= n - 1) idx = n - 2;
    // (t - first)/dt truncation can land one cell off near node boundaries
    while (idx > 0 && t < g.node(idx)) --idx;
    while (idx + 2 < n && t >= g.node(idx + 1)) ++idx;

    const double ta = g.node(idx);
    const double w = (t - ta) / dt;
    return s.values[idx] + w * (s.values[idx + 1] - s.values[idx]);
}

double sup_norm(const GridSignal& s) {
    double m = 0.0;
    for (double v : s.values) m = std::max(m, std::abs(v));
    return m;
}

double l2_norm(const GridSignal& s) {
    double acc = 0.0;
    for (double v : s.values) acc += v * v;
    return std::sqrt(acc);
}

double rel_error_l2(const GridSignal& approx, const GridSignal& exact) {
    if (!(approx.grid == exact.grid))
        throw ConfigError("rel_error_l2: signals live on different grids");
    const double denom = l2_norm(exact);
    if (denom == 0.0)
        throw NumericError("rel_error_l2: exact solution is identically zero");
    double acc = 0.0;
    for (std::size_t i = 0; i < approx.values.size(); ++i) {
        const double d = approx.values[i] - exact.values[i];
        acc += d * d;
    }
    return std::sqrt(acc) / denom;
}

double rel_error_sup(const GridSignal& approx, const GridSignal& exact) {
    if (!(approx.grid == exact.grid))
        throw ConfigError("rel_error_sup: signals live on different grids");
    const double denom = sup_norm(exact);
    if (denom == 0.0)
        throw NumericError("rel_error_sup: exact solution is identically zero");
    double m = 0.0;
    for (std::size_t i = 0; i < approx.values.size(); ++i)
        m = std::max(m, std::abs(approx.values[i] - exact.values[i]));
    return m / denom;
}

} // namespace deconv
