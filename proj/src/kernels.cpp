#include "deconv/kernels.hpp"

#include <cmath>

#include "deconv/errors.hpp"
#include "deconv/runtime.hpp"

namespace deconv {

double LowerTri::row_sum(std::size_t i) const {
    const double* r = row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += r[j];
    return acc;
}

LowerTri& LowerTri::operator+=(const LowerTri& other) {
    if (other.n_ != n_) throw ConfigError("LowerTri: dimension mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

LowerTri& LowerTri::scale(double c) {
    for (double& v : data_) v *= c;
    return *this;
}

namespace kernels {
namespace {

// One linear piece of the interpolant of node values on [sa, sb]: the line
// through nodes p and q (node positions sp, sq), or a constant when p == q.
// The decomposition mirrors eval_interp exactly: midpoint grids get a
// constant piece over the half-cell margin [0, t_0], which also keeps every
// row's support at nodes <= i (strict causality of the packed rows).
struct Segment {
    double sa, sb;
    std::size_t p, q;
    double sp, sq;
};

// Decompose [0, t_i] into linear pieces of the interpolant.
template <typename F>
void for_each_segment(const Grid& grid, std::size_t i, F&& emit) {
    if (grid.style() == GridStyle::endpoint) {
        for (std::size_t j = 0; j + 1 <= i; ++j)
            emit(Segment{grid.node(j), grid.node(j + 1), j, j + 1, grid.node(j),
                         grid.node(j + 1)});
        return;
    }
    // midpoint: constant margin piece, then the cells up to t_i
    const double t0 = grid.node(0);
    emit(Segment{0.0, t0, 0, 0, t0, t0});
    for (std::size_t j = 0; j + 1 <= i; ++j)
        emit(Segment{grid.node(j), grid.node(j + 1), j, j + 1, grid.node(j),
                     grid.node(j + 1)});
}

void conv_row(const Grid& grid, const ConvRowSpec& spec, std::size_t i, double* w) {
    const double t = grid.node(i);
    const bool corrected = static_cast<bool>(spec.psi_prime);
    for_each_segment(grid, i, [&](const Segment& s) {
        const double len = s.sb - s.sa;
        if (len <= 0.0) return;
        const double eta = len / spec.fine;
        const bool degenerate = s.p == s.q;
        const double inv_d = degenerate ? 0.0 : 1.0 / (s.sq - s.sp);
        for (int m = 0; m <= spec.fine; ++m) {
            const double sigma = s.sa + eta * m;
            const double c = eta * ((m == 0 || m == spec.fine) ? 0.5 : 1.0);
            const double psi = spec.psi(t - sigma);
            const double lp = degenerate ? 1.0 : (s.sq - sigma) * inv_d;
            w[s.p] += c * psi * lp;
            w[s.q] += c * psi * (degenerate ? 0.0 : 1.0 - lp);
        }
        if (corrected) {
            // trapezoid endpoint-derivative correction, per linear piece:
            // g(s) = psi(t-s) u(s), g'(s) = -psi'(t-s) u(s) + psi(t-s) u'(s)
            const double cc = eta * eta / 12.0;
            const double dpa = spec.psi_prime(t - s.sa);
            const double dpb = spec.psi_prime(t - s.sb);
            const double pa = spec.psi(t - s.sa);
            const double pb = spec.psi(t - s.sb);
            const double lpa = degenerate ? 1.0 : (s.sq - s.sa) * inv_d;
            const double lpb = degenerate ? 1.0 : (s.sq - s.sb) * inv_d;
            // node p
            w[s.p] += cc * ((-dpa * lpa - pa * inv_d) - (-dpb * lpb - pb * inv_d));
            // node q
            if (!degenerate)
                w[s.q] += cc * ((-dpa * (1.0 - lpa) + pa * inv_d) -
                                (-dpb * (1.0 - lpb) + pb * inv_d));
        }
    });
}

// tau_a^p - tau_b^p for 0 <= tau_b < tau_a, computed without cancellation.
double pow_diff(double tau_a, double tau_b, double p) {
    const double lead = std::pow(tau_a, p);
    if (tau_b <= 0.0) return lead;
    return lead * (-std::expm1(p * std::log(tau_b / tau_a)));
}

void abel_row(const Grid& grid, double gamma, std::size_t i, double* w) {
    const double t = grid.node(i);
    const double p1 = 1.0 - gamma;
    const double p2 = 2.0 - gamma;
    for_each_segment(grid, i, [&](const Segment& s) {
        if (s.sb <= s.sa) return;
        const double tau_a = t - s.sa; // > tau_b >= 0
        const double tau_b = t - s.sb;
        const double m0 = pow_diff(tau_a, tau_b, p1) / p1;
        const double m1 = t * m0 - pow_diff(tau_a, tau_b, p2) / p2;
        if (s.p == s.q) {
            w[s.p] += m0;
            return;
        }
        const double inv_d = 1.0 / (s.sq - s.sp);
        w[s.p] += (s.sq * m0 - m1) * inv_d;
        w[s.q] += (m1 - s.sp * m0) * inv_d;
    });
}

} // namespace

void conv_rows_serial(const Grid& grid, const ConvRowSpec& spec, LowerTri& out) {
    if (spec.fine < 1) throw ConfigError("conv_rows: fine factor must be >= 1");
    const std::size_t n = grid.node_count();
    out = LowerTri(n);
    for (std::size_t i = 0; i < n; ++i) conv_row(grid, spec, i, out.row(i));
}

void conv_rows_parallel(const Grid& grid, const ConvRowSpec& spec, LowerTri& out) {
    if (spec.fine < 1) throw ConfigError("conv_rows: fine factor must be >= 1");
    const auto n = static_cast<std::ptrdiff_t>(grid.node_count());
    out = LowerTri(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static, 1) num_threads(runtime::max_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i)
        conv_row(grid, spec, static_cast<std::size_t>(i), out.row(static_cast<std::size_t>(i)));
}

void conv_rows(const Grid& grid, const ConvRowSpec& spec, LowerTri& out) {
    if (runtime::parallel_enabled())
        conv_rows_parallel(grid, spec, out);
    else
        conv_rows_serial(grid, spec, out);
}

void abel_rows_serial(const Grid& grid, double gamma, LowerTri& out) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("abel_rows: gamma must lie in (0, 1)");
    const std::size_t n = grid.node_count();
    out = LowerTri(n);
    for (std::size_t i = 0; i < n; ++i) abel_row(grid, gamma, i, out.row(i));
}

void abel_rows_parallel(const Grid& grid, double gamma, LowerTri& out) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("abel_rows: gamma must lie in (0, 1)");
    const auto n = static_cast<std::ptrdiff_t>(grid.node_count());
    out = LowerTri(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static, 1) num_threads(runtime::max_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i)
        abel_row(grid, gamma, static_cast<std::size_t>(i), out.row(static_cast<std::size_t>(i)));
}

void abel_rows(const Grid& grid, double gamma, LowerTri& out) {
    if (runtime::parallel_enabled())
        abel_rows_parallel(grid, gamma, out);
    else
        abel_rows_serial(grid, gamma, out);
}

void apply_serial(const LowerTri& w, std::span<const double> x, std::span<double> y) {
    const std::size_t n = w.dim();
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = w.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += r[j] * x[j];
        y[i] = acc;
    }
}

void apply_parallel(const LowerTri& w, std::span<const double> x, std::span<double> y) {
    const auto n = static_cast<std::ptrdiff_t>(w.dim());
#pragma omp parallel for schedule(static, 1) num_threads(runtime::max_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double* r = w.row(static_cast<std::size_t>(i));
        double acc = 0.0;
        for (std::ptrdiff_t j = 0; j <= i; ++j) acc += r[j] * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = acc;
    }
}

void apply(const LowerTri& w, std::span<const double> x, std::span<double> y) {
    if (runtime::parallel_enabled() && w.dim() >= 64)
        apply_parallel(w, x, y);
    else
        apply_serial(w, x, y);
}

namespace {
inline void matmul_row(const LowerTri& a, const LowerTri& b, std::size_t i, double* c) {
    const double* ar = a.row(i);
    for (std::size_t j = 0; j <= i; ++j) {
        double acc = 0.0;
        for (std::size_t k = j; k <= i; ++k) acc += ar[k] * b.at(k, j);
        c[j] = acc;
    }
}

inline void gram_row(const LowerTri& k, std::size_t n, std::size_t i, double* g) {
    // g[j] = sum_{r >= max(i,j)} K[r][i] K[r][j], for j <= i
    for (std::size_t j = 0; j <= i; ++j) {
        double acc = 0.0;
        for (std::size_t r = i; r < n; ++r) acc += k.at(r, i) * k.at(r, j);
        g[j] = acc;
    }
}
} // namespace

void matmul_serial(const LowerTri& a, const LowerTri& b, LowerTri& c) {
    if (a.dim() != b.dim()) throw ConfigError("matmul: dimension mismatch");
    const std::size_t n = a.dim();
    c = LowerTri(n);
    for (std::size_t i = 0; i < n; ++i) matmul_row(a, b, i, c.row(i));
}

void matmul_parallel(const LowerTri& a, const LowerTri& b, LowerTri& c) {
    if (a.dim() != b.dim()) throw ConfigError("matmul: dimension mismatch");
    const auto n = static_cast<std::ptrdiff_t>(a.dim());
    c = LowerTri(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static, 1) num_threads(runtime::max_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i)
        matmul_row(a, b, static_cast<std::size_t>(i), c.row(static_cast<std::size_t>(i)));
}

void matmul(const LowerTri& a, const LowerTri& b, LowerTri& c) {
    if (runtime::parallel_enabled())
        matmul_parallel(a, b, c);
    else
        matmul_serial(a, b, c);
}

void gram_serial(const LowerTri& k, std::vector<double>& g) {
    const std::size_t n = k.dim();
    g.assign(n * n, 0.0);
    std::vector<double> rowbuf(n);
    for (std::size_t i = 0; i < n; ++i) {
        gram_row(k, n, i, rowbuf.data());
        for (std::size_t j = 0; j <= i; ++j) {
            g[i * n + j] = rowbuf[j];
            g[j * n + i] = rowbuf[j];
        }
    }
}

void gram_parallel(const LowerTri& k, std::vector<double>& g) {
    const std::size_t n = k.dim();
    g.assign(n * n, 0.0);
#pragma omp parallel num_threads(runtime::max_threads())
    {
        std::vector<double> rowbuf(n);
#pragma omp for schedule(static, 1)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            const auto ii = static_cast<std::size_t>(i);
            gram_row(k, n, ii, rowbuf.data());
            for (std::size_t j = 0; j <= ii; ++j) {
                g[ii * n + j] = rowbuf[j];
                g[j * n + ii] = rowbuf[j];
            }
        }
    }
}

void gram(const LowerTri& k, std::vector<double>& g) {
    if (runtime::parallel_enabled())
        gram_parallel(k, g);
    else
        gram_serial(k, g);
}

} // namespace kernels
} // namespace deconv
