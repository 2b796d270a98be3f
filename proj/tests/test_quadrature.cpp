#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "deconv/experiments.hpp"
#include "deconv/quadrature.hpp"

using namespace deconv;

namespace {

// Independent oracle for int_0^t v(s) (t-s)^{-gamma} ds: substituting
// xi = (t-s)^{1-gamma} removes the singularity, then composite trapezoid.
double abel_oracle(const std::function<double(double)>& v, double gamma, double t,
                   int panels = 1'000'000) {
    const double p = 1.0 - gamma;
    const double upper = std::pow(t, p);
    const double h = upper / panels;
    double acc = 0.5 * (v(t) + v(t - std::pow(upper, 1.0 / p)));
    for (int m = 1; m < panels; ++m) acc += v(t - std::pow(h * m, 1.0 / p));
    return acc * h / p;
}

double sup_diff(const GridSignal& a, const GridSignal& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

} // namespace

TEST_CASE("corrected trapezoid: cubic exactness and closed-form errors") {
    auto cube = [](double x) { return x * x * x; };
    CHECK(corrected_trapezoid(cube, {0.0, 3.0}, 0.0, 1.0, 1) == doctest::Approx(0.25).epsilon(1e-15));

    auto sq = [](double x) { return x * x; };
    CHECK(corrected_trapezoid(sq, {0.0, 2.0}, 0.0, 1.0, 2) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    // Euler-Maclaurin residual h^4/720 (g'''(1) - g'''(0)) = 2.39e-7 at n = 10
    auto ex = [](double x) { return std::exp(x); };
    const double got = corrected_trapezoid(ex, {1.0, std::exp(1.0)}, 0.0, 1.0, 10);
    CHECK(std::abs(got - std::expm1(1.0)) < 2.5e-7);

    CHECK_THROWS_AS(corrected_trapezoid(sq, {0.0, 0.0}, 1.0, 0.0, 4), ConfigError);
    CHECK_THROWS_AS(corrected_trapezoid(sq, {0.0, 0.0}, 0.0, 1.0, 0), ConfigError);
}

TEST_CASE("unit-weight convolution integrates exactly: f(t) = t") {
    for (GridStyle style : {GridStyle::midpoint, GridStyle::endpoint}) {
        Grid g(1.0, 25, style);
        KernelSpec k = KernelSpec::smooth([](double) { return 1.0; }, [](double) { return 0.0; });
        GridSignal one = sample(g, [](double) { return 1.0; });
        GridSignal f = forward_convolve(k, one);
        for (std::size_t i = 0; i < g.node_count(); ++i)
            CHECK(f.values[i] == doctest::Approx(g.node(i)).epsilon(1e-12));
    }
}

TEST_CASE("row sums integrate the constant exactly") {
    Grid g(1.0, 40, GridStyle::midpoint);
    ConvWeights w = conv_weights([](double) { return 1.0; }, [](double) { return 0.0; }, g);
    for (std::size_t i = 0; i < g.node_count(); ++i)
        CHECK(w.w.row_sum(i) == doctest::Approx(g.node(i)).epsilon(1e-12));

    const double gamma = 0.3;
    ConvWeights a = abel_weights(gamma, g);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const double t = g.node(i);
        CHECK(a.w.row_sum(i) ==
              doctest::Approx(std::pow(t, 1.0 - gamma) / (1.0 - gamma)).epsilon(1e-12));
    }
}

TEST_CASE("smooth forward problem matches the closed form at n = 200") {
    TestProblem p = make_exp_problem(); // a = 1, b = 2*pi
    Grid g(1.0, 200, GridStyle::midpoint);
    GridSignal f = forward_convolve(p.kernel, sample(g, p.u_exact));
    CHECK(sup_diff(f, sample(g, p.f_exact)) < 1e-4);
}

TEST_CASE("singular forward problem matches the closed form at n = 200") {
    TestProblem p = make_abel_problem(0.5);
    Grid g(1.0, 200, GridStyle::midpoint);
    GridSignal f = forward_convolve(p.kernel, sample(g, p.u_exact));
    CHECK(sup_diff(f, sample(g, p.f_exact)) < 1e-3);
}

TEST_CASE("forward error decays at second order under grid refinement") {
    for (const TestProblem& p : {make_exp_problem(), make_abel_problem(0.5)}) {
        double prev = 0.0;
        for (int step = 0; step < 3; ++step) {
            const int n = 50 << step;
            Grid g(1.0, n, GridStyle::midpoint);
            const double err =
                sup_diff(forward_convolve(p.kernel, sample(g, p.u_exact)), sample(g, p.f_exact));
            if (step > 0) CHECK(prev / err >= 3.5);
            prev = err;
        }
    }
}

TEST_CASE("forward convolution is linear") {
    TestProblem p = make_exp_problem();
    Grid g(1.0, 30, GridStyle::midpoint);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> uv(30), vv(30), sumv(30), cv(30);
    const double c = 1.7;
    for (int i = 0; i < 30; ++i) {
        uv[i] = dist(rng);
        vv[i] = dist(rng);
        sumv[i] = uv[i] + vv[i];
        cv[i] = c * uv[i];
    }
    GridSignal u(g, uv), v(g, vv), s(g, sumv), cu(g, cv);
    GridSignal fu = forward_convolve(p.kernel, u);
    GridSignal fv = forward_convolve(p.kernel, v);
    GridSignal fs = forward_convolve(p.kernel, s);
    GridSignal fcu = forward_convolve(p.kernel, cu);
    for (int i = 0; i < 30; ++i) {
        CHECK(fs.values[i] == doctest::Approx(fu.values[i] + fv.values[i]).epsilon(1e-12));
        CHECK(fcu.values[i] == doctest::Approx(c * fu.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("abel weights: closed-form moments") {
    // v(s) = s, gamma = 1/2, t = 1: Beta(2, 1/2) = 4/3, exact for linear v
    Grid g(1.0, 16, GridStyle::endpoint);
    ConvWeights w = abel_weights(0.5, g);
    GridSignal v = sample(g, [](double s) { return s; });
    GridSignal y = w.apply(v);
    CHECK(y.values.back() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(abel_weights(0.0, g), ConfigError);
    CHECK_THROWS_AS(abel_weights(1.0, g), ConfigError);
    CHECK_THROWS_AS(abel_weights(-0.2, g), ConfigError);
}

TEST_CASE("abel weights vs adaptive oracle for a smooth integrand") {
    // gamma = 0.1, v = 1 - s^2, t = 1; fine grid so the interpolation error of
    // the quadratic stays below the tolerance
    const double gamma = 0.1;
    Grid g(1.0, 1000, GridStyle::endpoint);
    ConvWeights w = abel_weights(gamma, g);
    auto vf = [](double s) { return 1.0 - s * s; };
    GridSignal y = w.apply(sample(g, vf));
    const double oracle = abel_oracle(vf, gamma, 1.0);
    // cross-check the oracle against the closed form 2/(2-g) - 1/(3-g)
    CHECK(oracle == doctest::Approx(2.0 / 1.9 - 1.0 / 2.9).epsilon(1e-9));
    CHECK(std::abs(y.values.back() - oracle) < 1e-6);
}

TEST_CASE("abel weights are moment-exact on piecewise-linear data") {
    const double gamma = 0.35;
    Grid g(1.0, 20, GridStyle::endpoint);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> vv(g.node_count());
    for (double& x : vv) x = dist(rng);
    GridSignal v(g, vv);

    ConvWeights w = abel_weights(gamma, g);
    GridSignal y = w.apply(v);
    auto interp = [&](double s) { return eval_interp(v, s); };
    for (std::size_t i : {std::size_t{3}, std::size_t{11}, std::size_t{19}}) {
        const double oracle = abel_oracle(interp, gamma, g.node(i));
        CHECK(std::abs(y.values[i] - oracle) < 1e-10);
    }
}

TEST_CASE("abel prefix integral handles off-node upper limits") {
    const double gamma = 0.4;
    Grid g(1.0, 24, GridStyle::midpoint);
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> vv(g.node_count());
    for (double& x : vv) x = dist(rng);
    GridSignal v(g, vv);
    auto interp = [&](double s) { return eval_interp(v, s); };

    for (double tau : {0.17, 0.5, 0.93, 1.0}) {
        const double oracle = abel_oracle(interp, gamma, tau);
        CHECK(std::abs(abel_prefix_integral(v, gamma, tau) - oracle) < 1e-9);
    }
    CHECK(abel_prefix_integral(v, gamma, 0.0) == 0.0);
}

TEST_CASE("abel inverse recovers u from exact derivative data") {
    // pure fractional integral of u = 1 - t^2 at gamma = 0.5; inverting with
    // the exact f' must return u up to quadrature error
    const double gamma = 0.5;
    auto f_prime = [gamma](double s) {
        return std::pow(s, gamma - 1.0) / std::tgamma(gamma) -
               2.0 * std::pow(s, gamma + 1.0) / std::tgamma(2.0 + gamma);
    };
    Grid g(1.0, 200, GridStyle::midpoint);
    GridSignal u = abel_inverse_exact(f_prime, gamma, g);
    GridSignal u_ref = sample(g, [](double t) { return 1.0 - t * t; });
    CHECK(sup_diff(u, u_ref) < 1e-3);
}

TEST_CASE("kernel spec validation") {
    CHECK_THROWS_AS(KernelSpec::smooth([](double) { return 0.0; }, [](double) { return 0.0; }),
                    ConfigError);
    CHECK_THROWS_AS(
        KernelSpec::singular(1.2, [](double) { return 0.0; }, [](double) { return 0.0; }),
        ConfigError);
}
