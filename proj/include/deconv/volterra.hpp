#pragma once

#include <functional>

#include "deconv/grid.hpp"
#include "deconv/kernel.hpp"
#include "deconv/kernels.hpp"
#include "deconv/regularize.hpp"
#include "deconv/report.hpp"

namespace deconv {

/// Discretization of the well-posed second-kind equation (I + S) u = g.
/// s is lower triangular (causality); the solve is forward substitution.
struct SecondKindSystem {
    Grid grid;
    LowerTri s;
    double min_diag = 1.0;            // min over i of 1 + s[i][i]
    bool conditioning_warning = false; // min_diag < 0.5 (reported, non-fatal)
};

/// S u = int_0^t k'(t - s) u(s) ds for a smooth kernel normalized to k(0) = 1.
SecondKindSystem build_smooth_S(const KernelSpec& k, const Grid& grid, int fine_factor = 4);

/// S u = (1 / Gamma(1-gamma)) int_0^t [m(0) u(s) + (m' * u)(s)] (t-s)^{-gamma} ds.
SecondKindSystem build_singular_S(const KernelSpec& k, const Grid& grid, int fine_factor = 4);

/// Forward substitution on (I + s) u = g. Throws NumericError when a diagonal
/// entry of the system is below 1e-10 in magnitude.
GridSignal solve_second_kind(const SecondKindSystem& sys, const GridSignal& g);

struct DeconvOptions {
    int fine_factor = 4;
    FractionalMode fractional_mode = FractionalMode::integrate_then_diff;
    /// When set, replaces the regularized derivative by this exact f' (oracle
    /// path for noiseless runs; delta and h are ignored for the smooth case).
    std::function<double(double)> exact_f_prime;
};

/// Full pipeline u_delta = (I + S)^{-1} R(delta) f_delta, dispatching on the
/// kernel variant. Smooth kernels with k(0) != 1 are rescaled internally and
/// the rescaling recorded in the report metadata. Residuals are measured
/// against f_delta interpolated onto the solution grid.
DeconvReport deconvolve(const KernelSpec& k, const GridSignal& f_delta,
                        const RegConfig& cfg, const Grid& grid,
                        const DeconvOptions& opts = {});

} // namespace deconv
