#include "deconv/tikhonov.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "deconv/errors.hpp"
#include "deconv/kernels.hpp"

namespace deconv {

void TikhonovConfig::validate() const {
    if (!(delta > 0.0)) throw ConfigError("TikhonovConfig: delta must be positive");
    if (!(c_morozov >= 1.0)) throw ConfigError("TikhonovConfig: c_morozov must be >= 1");
    if (!(eps_lo > 0.0 && eps_hi > eps_lo))
        throw ConfigError("TikhonovConfig: eps bracket must be positive and increasing");
    if (!(tol_rel > 0.0 && tol_rel < 0.1))
        throw ConfigError("TikhonovConfig: tol_rel must lie in (0, 0.1)");
}

namespace {

Eigen::MatrixXd dense_of(const LowerTri& w) {
    const auto n = static_cast<Eigen::Index>(w.dim());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
            m(i, j) = w.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return m;
}

void check_finite(const GridSignal& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) throw NumericError("tikhonov: non-finite input data");
}

} // namespace

GridSignal tikhonov_solve(const ConvWeights& K, const GridSignal& f_delta, double eps) {
    if (!(f_delta.grid == K.grid)) throw ConfigError("tikhonov_solve: grid mismatch");
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw NumericError("tikhonov_solve: eps must be positive and finite");
    check_finite(f_delta);

    const std::size_t n = K.w.dim();
    std::vector<double> gm;
    kernels::gram(K.w, gm);

    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd A = Eigen::Map<const Eigen::MatrixXd>(gm.data(), ni, ni);
    A.diagonal().array() += eps;

    // b = K^T f
    const Eigen::MatrixXd Kd = dense_of(K.w);
    const Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(f_delta.values.data(), ni);
    const Eigen::VectorXd b = Kd.transpose() * f;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (ldlt.info() != Eigen::Success)
        throw NumericError("tikhonov_solve: normal-equation factorization failed");
    Eigen::VectorXd u = ldlt.solve(b);
    u += ldlt.solve(b - A * u); // one refinement step
    if (!u.allFinite()) throw NumericError("tikhonov_solve: non-finite solution");

    return {K.grid, std::vector<double>(u.data(), u.data() + n)};
}

namespace {

// Spectral machinery shared by the Morozov probes: one eigendecomposition of
// K^T K, then each eps costs O(n^2).
struct MorozovWorkspace {
    Eigen::MatrixXd Kd;
    Eigen::MatrixXd V;
    Eigen::VectorXd lambda; // eigenvalues clamped at 0
    Eigen::VectorXd f;
    Eigen::VectorXd vtb; // V^T K^T f
    double norm_scale;   // sqrt(T/n)

    Eigen::VectorXd solve(double eps) const {
        Eigen::VectorXd g = vtb.array() / (lambda.array() + eps);
        return V * g;
    }
    double discrepancy(double eps) const {
        const Eigen::VectorXd r = Kd * solve(eps) - f;
        return norm_scale * r.norm();
    }
};

MorozovWorkspace make_workspace(const ConvWeights& K, const GridSignal& f_delta) {
    MorozovWorkspace ws;
    ws.Kd = dense_of(K.w);
    const auto n = ws.Kd.rows();

    std::vector<double> gm;
    kernels::gram(K.w, gm);
    Eigen::MatrixXd G = Eigen::Map<const Eigen::MatrixXd>(gm.data(), n, n);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    if (es.info() != Eigen::Success)
        throw NumericError("morozov_select: eigendecomposition failed");
    ws.V = es.eigenvectors();
    ws.lambda = es.eigenvalues().cwiseMax(0.0);
    ws.f = Eigen::Map<const Eigen::VectorXd>(f_delta.values.data(), n);
    ws.vtb = ws.V.transpose() * (ws.Kd.transpose() * ws.f);
    ws.norm_scale = std::sqrt(K.grid.t_end() / static_cast<double>(n));
    return ws;
}

} // namespace

MorozovResult morozov_select(const ConvWeights& K, const GridSignal& f_delta,
                             const TikhonovConfig& cfg) {
    cfg.validate();
    if (!(f_delta.grid == K.grid)) throw ConfigError("morozov_select: grid mismatch");
    check_finite(f_delta);

    const MorozovWorkspace ws = make_workspace(K, f_delta);
    const double target = cfg.c_morozov * cfg.delta;

    MorozovResult res{0.0, GridSignal(K.grid, std::vector<double>(K.grid.node_count(), 0.0)),
                      0.0, {}};
    auto probe = [&](double eps) {
        const double d = ws.discrepancy(eps);
        res.trajectory.emplace_back(eps, d);
        return d;
    };

    // bracket the crossing, expanding up to four decades per side
    double lo = cfg.eps_lo, hi = cfg.eps_hi;
    double dlo = probe(lo), dhi = probe(hi);
    for (int i = 0; i < 4 && dlo > target; ++i) dlo = probe(lo /= 10.0);
    for (int i = 0; i < 4 && dhi < target; ++i) dhi = probe(hi *= 10.0);
    if (dlo > target || dhi < target)
        throw NumericError(
            "morozov_select: discrepancy never crosses c*delta within the expanded "
            "bracket; delta is inconsistent with the data");

    // bisection on log eps; the discrepancy is monotone increasing in eps
    double eps = lo;
    double disc = dlo;
    for (int it = 0; it < 60; ++it) {
        eps = std::sqrt(lo * hi);
        disc = probe(eps);
        if (std::abs(disc - target) <= cfg.tol_rel * target) break;
        (disc > target ? hi : lo) = eps;
    }

    res.eps = eps;
    res.discrepancy = disc;
    const Eigen::VectorXd u = ws.solve(eps);
    res.u = GridSignal(K.grid, std::vector<double>(u.data(), u.data() + u.size()));
    return res;
}

} // namespace deconv
