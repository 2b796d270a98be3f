#pragma once

#include <optional>

#include "deconv/grid.hpp"

namespace deconv {

/// Configuration of the stable differentiation step.
///
/// The effective step is h_override when present, else (2 delta / m2)^{1/2}.
/// m2 bounds ||f''|| on [0, T]; when only h is known the implied value
/// 2 delta / h^2 is reported instead.
struct RegConfig {
    double delta = 0.0;
    std::optional<double> m2;
    std::optional<double> h_override;

    double effective_step() const;
    double implied_m2() const; // 2 delta / h^2 for the effective step
};

/// (2 delta / m2)^{1/2}
double optimal_step(double delta, double m2);

/// Central difference with step h = cfg.effective_step() evaluated on the
/// requested output grid. Off-grid samples of f_delta come from eval_interp.
/// Nodes inside the boundary layers [0, h) and (T-h, T] receive the estimate
/// at the nearest interior point t = h or t = T-h.
GridSignal stable_derivative(const GridSignal& f_delta, const RegConfig& cfg,
                             const Grid& out);

/// How the fractional regularizer orders the Abel integral and the central
/// difference. The two compositions agree in the interior as h -> 0 but treat
/// the layer near t = 0 differently; integrate_then_diff differences the
/// smooth fractional integral of f_delta and is the production path (it
/// stays accurate when f' has an s^{gamma-1} singularity at the origin).
/// diff_then_integrate applies the Abel weights to the raw central-difference
/// signal and is kept as the literal composition for cross-checks.
enum class FractionalMode { integrate_then_diff, diff_then_integrate };

/// R_1(delta) f_delta = (1 / Gamma(1-gamma)) AbelIntegral_gamma(R(delta) f_delta)
/// on the output grid.
GridSignal fractional_regularizer(const GridSignal& f_delta, double gamma,
                                  const RegConfig& cfg, const Grid& out,
                                  FractionalMode mode = FractionalMode::integrate_then_diff);

} // namespace deconv
