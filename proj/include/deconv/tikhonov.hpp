#pragma once

#include <utility>
#include <vector>

#include "deconv/grid.hpp"
#include "deconv/quadrature.hpp"

namespace deconv {

struct TikhonovConfig {
    double delta = 0.0;          // noise level; Morozov targets c_morozov * delta
    double c_morozov = 1.0;      // >= 1
    double eps_lo = 1e-12;       // initial bracket
    double eps_hi = 1e2;
    double tol_rel = 1e-3;       // relative tolerance on the discrepancy equation

    void validate() const;
};

/// Minimizer of ||K u - f||_2^2 + eps ||u||_2^2 via the normal equations
/// (K^T K + eps I) u = K^T f, solved by an SPD factorization with one step of
/// iterative refinement.
GridSignal tikhonov_solve(const ConvWeights& K, const GridSignal& f_delta, double eps);

struct MorozovResult {
    double eps = 0.0;
    GridSignal u;
    double discrepancy = 0.0; // sqrt(T/n) || K u - f ||_2 at the returned eps
    std::vector<std::pair<double, double>> trajectory; // (eps, discrepancy) probes
};

/// Choose eps by the discrepancy principle: bisection on log eps for
/// sqrt(T/n) ||K u_eps - f|| = c * delta, exploiting monotonicity of the
/// discrepancy in eps. The bracket expands up to four decades per side before
/// a missing crossing is reported as NumericError.
MorozovResult morozov_select(const ConvWeights& K, const GridSignal& f_delta,
                             const TikhonovConfig& cfg);

} // namespace deconv
