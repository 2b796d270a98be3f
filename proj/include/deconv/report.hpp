#pragma once

#include <map>
#include <optional>
#include <string>

#include "deconv/grid.hpp"

namespace deconv {

/// Outcome of one inversion run.
struct DeconvReport {
    DeconvReport(std::string method_, GridSignal solution_)
        : method(std::move(method_)), solution(std::move(solution_)) {}

    std::string method; // "deconv" | "tikhonov"
    GridSignal solution;
    std::optional<double> rel_l2;  // present iff the exact solution is known
    std::optional<double> sup_err; // relative sup-norm error, same condition
    double residual_sup = 0.0;     // || k*u - f_delta ||_inf on the solution grid
    double residual_l2 = 0.0;      // sqrt(T/n) weighted l2 residual
    double h_used = 0.0;           // differentiation step (0 for tikhonov)
    std::optional<double> eps_used;
    double wall_ms = 0.0; // solve time only, data generation excluded
    std::map<std::string, std::string> metadata;
};

} // namespace deconv
