#pragma once

#include <functional>
#include <utility>

#include "deconv/grid.hpp"
#include "deconv/kernel.hpp"
#include "deconv/kernels.hpp"

namespace deconv {

/// Quadrature weight table for a causal (Volterra) operator: row i holds
/// coefficients such that sum_j w[i][j] v_j approximates
/// int_0^{t_i} psi(t_i - s) v(s) ds for v piecewise linear on the grid.
struct ConvWeights {
    Grid grid;
    LowerTri w;

    GridSignal apply(const GridSignal& v) const;
};

/// Composite trapezoid rule over [a, b] with n subintervals plus the
/// endpoint-derivative correction (h^2/12)(g'(a) - g'(b)); exact for cubics.
double corrected_trapezoid(const std::function<double(double)>& g,
                           std::pair<double, double> g_prime_ends, double a, double b,
                           int n);

/// Weight table for a smooth weight function psi. When psi_prime is given the
/// per-segment endpoint correction is folded into the weights.
ConvWeights conv_weights(const std::function<double(double)>& psi,
                         const std::function<double(double)>& psi_prime, const Grid& grid,
                         int fine_factor = 4);

/// Product-integration weights for the weakly singular weight (t-s)^{-gamma}:
/// exact for piecewise-linear v (closed-form cell moments).
ConvWeights abel_weights(double gamma, const Grid& grid);

/// Full discretization of u -> (k * u) on the grid. Smooth kernels use the
/// corrected trapezoid on a grid refined by fine_factor; singular kernels use
/// product integration for the Abel part and never sample k at 0.
ConvWeights forward_weights(const KernelSpec& k, const Grid& grid, int fine_factor = 4);

/// (k * u) sampled on u's grid.
GridSignal forward_convolve(const KernelSpec& k, const GridSignal& u, int fine_factor = 4);

/// int_0^tau s~(sigma) (tau - sigma)^{-gamma} dsigma for the piecewise-linear
/// form of the signal, with arbitrary upper limit tau in [0, T].
double abel_prefix_integral(const GridSignal& s, double gamma, double tau);

/// A^{-1} f = (1 / Gamma(1-gamma)) int_0^t f'(s) (t-s)^{-gamma} ds evaluated
/// from an exact derivative callable. Handles an s^{gamma-1} endpoint
/// singularity of f' by subtracting its strength (estimated from the limit
/// s^{1-gamma} f'(s)) and integrating that part in closed form. Oracle-grade
/// path for noiseless runs and round-trip tests.
GridSignal abel_inverse_exact(const std::function<double(double)>& f_prime, double gamma,
                              const Grid& out, int fine_factor = 4);

} // namespace deconv
