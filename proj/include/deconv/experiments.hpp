#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deconv/grid.hpp"
#include "deconv/kernel.hpp"
#include "deconv/regularize.hpp"
#include "deconv/report.hpp"

namespace deconv {

inline constexpr double pi = 3.14159265358979323846;

/// A test problem with a closed-form data/solution pair. Factories run a
/// self-consistency gate (forward quadrature of u_exact against f_exact).
struct TestProblem {
    std::string name;
    KernelSpec kernel;
    std::function<double(double)> u_exact;
    std::function<double(double)> f_exact;
    std::function<double(double)> f_prime; // exact derivative for oracle paths
    double t_end = 1.0;
    std::map<std::string, double> params;
};

/// k(y) = exp(a y), u(t) = sin(b t) + cos(b t) on [0, 1].
TestProblem make_exp_problem(double a = 1.0, double b = 2.0 * pi);

/// k(t) = t^{gamma-1}/Gamma(gamma) + m(t) with polynomial
/// m(t) = c0 + c1 t + c2 t^2 and u(t) = 1 - t^2 on [0, 1].
TestProblem make_abel_problem(double gamma, std::array<double, 3> m_coeffs = {0.0, 0.0, 1.0});

/// Self-consistency gate: forward_convolve of sampled u_exact must match
/// sampled f_exact within tol (sup) at the given resolution.
void validate_problem(const TestProblem& p, double tol = 1e-3, int n = 200);

Grid solution_grid(const TestProblem& p, int n);
Grid data_grid(const TestProblem& p, int n, int refine = 4);

/// Deterministic bounded perturbation: a seeded sum of five sinusoids with
/// log-uniform frequencies, rescaled so that sup|e| over the data grid equals
/// cap exactly.
struct NoiseSpec {
    std::uint64_t seed = 1;
    int n_components = 5;
    double freq_lo = 2.0 * pi;
    double freq_hi = 40.0 * pi;
    double cap = 0.1;
};

/// f + e with the perturbation above.
GridSignal make_noise(const GridSignal& f, const NoiseSpec& spec);

/// Clean data sampled on the data grid, perturbed when delta > 0.
GridSignal make_data(const TestProblem& p, double delta, int n, std::uint64_t seed,
                     int data_refine = 4);

enum class Method { deconv, tikhonov, both };

struct RunOptions {
    Method method = Method::both;
    std::optional<double> h;  // differentiation step; wins over m2 when both given
    std::optional<double> m2; // curvature bound, used when h is absent
    double c_morozov = 1.0;
    int fine_factor = 4;
    int data_refine = 4;              // data grid has data_refine*n cells
    bool exact_derivative = false;    // noiseless oracle path (deconv only)
    FractionalMode fractional_mode = FractionalMode::integrate_then_diff;
};

/// One method execution; failures are recorded, not thrown, so a sweep can
/// keep going.
struct MethodRun {
    bool ok = false;
    std::string error;
    std::optional<DeconvReport> report;
};

struct ComparisonRow {
    std::uint64_t seed = 0;
    MethodRun deconv;
    MethodRun tikhonov;
};

struct Aggregate {
    int count = 0;
    double mean_rel_l2 = 0.0;
    double min_rel_l2 = 0.0;
    double max_rel_l2 = 0.0;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    Aggregate deconv;
    Aggregate tikhonov;
};

/// Paired runs on byte-identical noisy data per seed. Seeds execute
/// concurrently; the table ordering follows the seed list.
ComparisonTable run_comparison(const TestProblem& p, double delta, int n,
                               const std::vector<std::uint64_t>& seeds,
                               const RunOptions& opts = {});

struct SweepRow {
    double h = 0.0;
    MethodRun run;
};

/// One deconvolve run per step value on a fixed noisy draw.
std::vector<SweepRow> sweep_h(const TestProblem& p, double delta, int n,
                              const std::vector<double>& h_values, std::uint64_t seed,
                              const RunOptions& opts = {});

/// Single-method runners on prepared data (also used by the CLI).
DeconvReport run_deconv(const TestProblem& p, const GridSignal& f_delta, double delta,
                        int n, const RunOptions& opts);
DeconvReport run_tikhonov(const TestProblem& p, const GridSignal& f_delta, double delta,
                          int n, const RunOptions& opts);

} // namespace deconv
