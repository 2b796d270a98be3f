#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "deconv/errors.hpp"

namespace deconv {

enum class GridStyle { midpoint, endpoint };

/// Uniform grid over [0, T].
///
/// A midpoint grid with n cells has nodes t_i = (i + 1/2) T/n, i = 0..n-1
/// (no node touches the interval ends); an endpoint grid has nodes
/// t_i = i T/n, i = 0..n. Spacing is T/n in both styles.
class Grid {
public:
    Grid(double t_end, int cells, GridStyle style);

    double t_end() const noexcept { return t_end_; }
    int cells() const noexcept { return cells_; }
    GridStyle style() const noexcept { return style_; }
    double spacing() const noexcept { return t_end_ / cells_; }

    std::size_t node_count() const noexcept {
        return style_ == GridStyle::midpoint ? static_cast<std::size_t>(cells_)
                                             : static_cast<std::size_t>(cells_) + 1;
    }

    double node(std::size_t i) const;
    std::vector<double> nodes() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double t_end_;
    int cells_;
    GridStyle style_;
};

/// Samples of a function at the grid nodes. Immutable value type: build it,
/// then share freely across threads.
struct GridSignal {
    Grid grid;
    std::vector<double> values;

    GridSignal(Grid g, std::vector<double> v);
};

/// Sample a callable at every node.
GridSignal sample(const Grid& g, const std::function<double(double)>& f);

/// Piecewise-linear interpolation through the node values, with constant
/// extension by the first/last value over the half-cell margins a midpoint
/// grid leaves at the interval ends. Throws ConfigError for t outside [0, T].
double eval_interp(const GridSignal& s, double t);

/// max_i |values_i|
double sup_norm(const GridSignal& s);

/// Plain Euclidean norm over node values.
double l2_norm(const GridSignal& s);

/// ||approx - exact||_2 / ||exact||_2 over node values; both signals must
/// share the grid. Throws NumericError when exact is identically zero.
double rel_error_l2(const GridSignal& approx, const GridSignal& exact);

/// Same ratio in the sup norm.
double rel_error_sup(const GridSignal& approx, const GridSignal& exact);

} // namespace deconv
