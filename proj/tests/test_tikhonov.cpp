#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "deconv/experiments.hpp"
#include "deconv/tikhonov.hpp"
#include "deconv/volterra.hpp"

using namespace deconv;

namespace {
constexpr double kPi = 3.14159265358979323846;

ConvWeights identity_weights(const Grid& g) {
    ConvWeights w{g, LowerTri(g.node_count())};
    for (std::size_t i = 0; i < g.node_count(); ++i) w.w.at(i, i) = 1.0;
    return w;
}

Eigen::MatrixXd dense(const LowerTri& w) {
    const auto n = static_cast<Eigen::Index>(w.dim());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
            m(i, j) = w.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return m;
}
} // namespace

TEST_CASE("scalar normal equation: K = I gives u = c/(1+eps)") {
    Grid g(1.0, 8, GridStyle::midpoint);
    ConvWeights K = identity_weights(g);
    const double c = 2.5;
    GridSignal f = sample(g, [c](double) { return c; });
    for (double eps : {1e-3, 0.1, 1.0}) {
        GridSignal u = tikhonov_solve(K, f, eps);
        for (double v : u.values) CHECK(v == doctest::Approx(c / (1.0 + eps)).epsilon(1e-12));
    }
}

TEST_CASE("penalty dominance: ||u|| decays monotonically as eps grows") {
    TestProblem p = make_exp_problem();
    Grid g = solution_grid(p, 30);
    ConvWeights K = forward_weights(p.kernel, g);
    GridSignal f = sample(g, p.f_exact);

    double prev = -1.0;
    for (double eps : {1e-2, 1.0, 1e2, 1e4, 1e6}) {
        const double norm = l2_norm(tikhonov_solve(K, f, eps));
        if (prev >= 0.0) CHECK(norm <= prev + 1e-12);
        prev = norm;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("normal-equation residual stays at solver precision") {
    TestProblem p = make_exp_problem();
    for (int n : {10, 50}) {
        Grid g = solution_grid(p, n);
        ConvWeights Kw = forward_weights(p.kernel, g);
        GridSignal f_delta = make_noise(sample(g, p.f_exact), NoiseSpec{3, 5, 2.0 * kPi, 40.0 * kPi, 0.1});

        Eigen::MatrixXd K = dense(Kw.w);
        Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(f_delta.values.data(), n);
        Eigen::VectorXd b = K.transpose() * f;
        for (double eps : {1e-8, 1e-6, 1e-4, 1e-2, 1.0, 1e2}) {
            GridSignal u = tikhonov_solve(Kw, f_delta, eps);
            Eigen::VectorXd uv = Eigen::Map<const Eigen::VectorXd>(u.values.data(), n);
            Eigen::MatrixXd A = K.transpose() * K;
            A.diagonal().array() += eps;
            CHECK((A * uv - b).norm() <= 1e-10 * b.norm());
        }
    }
}

TEST_CASE("invalid inputs are rejected") {
    Grid g(1.0, 5, GridStyle::midpoint);
    ConvWeights K = identity_weights(g);
    GridSignal f(g, {1.0, 2.0, 3.0, 4.0, 5.0});
    CHECK_THROWS_AS(tikhonov_solve(K, f, 0.0), NumericError);
    GridSignal bad(g, {1.0, std::nan(""), 3.0, 4.0, 5.0});
    CHECK_THROWS_AS(tikhonov_solve(K, bad, 0.1), NumericError);
}

TEST_CASE("discrepancy is monotone in eps on random problems") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    Grid g(1.0, 15, GridStyle::midpoint);
    const double w = std::sqrt(g.t_end() / 15.0);

    for (int trial = 0; trial < 20; ++trial) {
        ConvWeights K{g, LowerTri(15)};
        for (std::size_t i = 0; i < 15; ++i) {
            for (std::size_t j = 0; j < i; ++j) K.w.at(i, j) = dist(rng) * 0.3;
            K.w.at(i, i) = 0.5 + std::abs(dist(rng));
        }
        std::vector<double> fv(15);
        for (double& v : fv) v = dist(rng) * 2.0;
        GridSignal f(g, fv);

        double prev = -1.0;
        for (double eps = 1e-8; eps < 1e4; eps *= 10.0) {
            GridSignal u = tikhonov_solve(K, f, eps);
            GridSignal r = K.apply(u);
            double acc = 0.0;
            for (std::size_t i = 0; i < 15; ++i) {
                const double d = r.values[i] - fv[i];
                acc += d * d;
            }
            const double disc = w * std::sqrt(acc);
            CHECK(disc >= prev - 1e-12);
            prev = disc;
        }
    }
}

TEST_CASE("morozov selection on the smooth test problem") {
    TestProblem p = make_exp_problem();
    const double delta = 0.1;
    Grid g = solution_grid(p, 10);
    ConvWeights K = forward_weights(p.kernel, g);
    const GridSignal f_clean_data = sample(data_grid(p, 10), p.f_exact);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GridSignal f_delta_data =
            make_noise(f_clean_data, NoiseSpec{seed, 5, 2.0 * kPi, 40.0 * kPi, delta});
        GridSignal f_delta =
            sample(g, [&](double t) { return eval_interp(f_delta_data, t); });

        TikhonovConfig cfg;
        cfg.delta = delta;
        MorozovResult res = morozov_select(K, f_delta, cfg);

        // fixed point within the configured tolerance
        CHECK(std::abs(res.discrepancy - delta) <= cfg.tol_rel * delta);
        // paper-scale parameter
        CHECK(res.eps >= 3e-3);
        CHECK(res.eps <= 3e-1);
        // monotone trajectory when sorted by eps
        auto traj = res.trajectory;
        std::sort(traj.begin(), traj.end());
        for (std::size_t i = 1; i < traj.size(); ++i)
            CHECK(traj[i].second >= traj[i - 1].second - 1e-12);
    }
}

TEST_CASE("morozov on consistent data with a tiny delta tracks the direct solve") {
    TestProblem p = make_exp_problem();
    Grid g = solution_grid(p, 20);
    ConvWeights K = forward_weights(p.kernel, g);
    GridSignal f = sample(g, p.f_exact); // no noise

    TikhonovConfig cfg;
    cfg.delta = 1e-5;
    MorozovResult res = morozov_select(K, f, cfg);
    CHECK(std::abs(res.discrepancy - cfg.delta) <= cfg.tol_rel * cfg.delta);
    CHECK(res.eps < 1e-4);

    // near the unregularized solution: forward substitution on K u = f
    std::vector<double> u_direct(f.values.size());
    for (std::size_t i = 0; i < u_direct.size(); ++i) {
        double acc = f.values[i];
        for (std::size_t j = 0; j < i; ++j) acc -= K.w.at(i, j) * u_direct[j];
        u_direct[i] = acc / K.w.at(i, i);
    }
    CHECK(rel_error_l2(res.u, GridSignal(g, u_direct)) < 0.05);
}

TEST_CASE("morozov reports a missing crossing") {
    TestProblem p = make_exp_problem();
    Grid g = solution_grid(p, 10);
    ConvWeights K = forward_weights(p.kernel, g);
    GridSignal f = sample(g, p.f_exact);

    TikhonovConfig cfg;
    cfg.delta = 100.0; // far above ||f||: discrepancy can never reach c*delta
    CHECK_THROWS_AS(morozov_select(K, f, cfg), NumericError);
}
