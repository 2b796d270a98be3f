#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "deconv/grid.hpp"

namespace deconv {

/// Dense lower-triangular matrix in packed row storage (row i holds i+1
/// entries). All causal (Volterra) discretizations in this project are of
/// this form.
class LowerTri {
public:
    LowerTri() : n_(0) {}
    explicit LowerTri(std::size_t n) : n_(n), data_(n * (n + 1) / 2, 0.0) {}

    std::size_t dim() const noexcept { return n_; }

    double* row(std::size_t i) noexcept { return data_.data() + i * (i + 1) / 2; }
    const double* row(std::size_t i) const noexcept { return data_.data() + i * (i + 1) / 2; }

    double& at(std::size_t i, std::size_t j) { return row(i)[j]; }
    double at(std::size_t i, std::size_t j) const { return row(i)[j]; }

    double row_sum(std::size_t i) const;

    LowerTri& operator+=(const LowerTri& other);
    LowerTri& scale(double c);

private:
    std::size_t n_;
    std::vector<double> data_;
};

namespace kernels {

// Hot loops of the solver. Every routine exists in a serial reference
// version and an OpenMP version that partitions independent rows across
// threads; the per-row arithmetic is identical, so the two variants produce
// bit-identical results (tested). The unsuffixed entry points dispatch on
// runtime::parallel_enabled().

struct ConvRowSpec {
    std::function<double(double)> psi;        // convolution weight function
    std::function<double(double)> psi_prime;  // optional; enables endpoint correction
    int fine = 4;                             // refinement per grid segment
};

void conv_rows_serial(const Grid& grid, const ConvRowSpec& spec, LowerTri& out);
void conv_rows_parallel(const Grid& grid, const ConvRowSpec& spec, LowerTri& out);
void conv_rows(const Grid& grid, const ConvRowSpec& spec, LowerTri& out);

void abel_rows_serial(const Grid& grid, double gamma, LowerTri& out);
void abel_rows_parallel(const Grid& grid, double gamma, LowerTri& out);
void abel_rows(const Grid& grid, double gamma, LowerTri& out);

void apply_serial(const LowerTri& w, std::span<const double> x, std::span<double> y);
void apply_parallel(const LowerTri& w, std::span<const double> x, std::span<double> y);
void apply(const LowerTri& w, std::span<const double> x, std::span<double> y);

/// c = a * b (both lower-triangular, same dimension).
void matmul_serial(const LowerTri& a, const LowerTri& b, LowerTri& c);
void matmul_parallel(const LowerTri& a, const LowerTri& b, LowerTri& c);
void matmul(const LowerTri& a, const LowerTri& b, LowerTri& c);

/// Dense symmetric Gram matrix G = K^T K, row-major n*n.
void gram_serial(const LowerTri& k, std::vector<double>& g);
void gram_parallel(const LowerTri& k, std::vector<double>& g);
void gram(const LowerTri& k, std::vector<double>& g);

} // namespace kernels

} // namespace deconv
