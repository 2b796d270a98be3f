// Timing comparison of the serial reference kernels against their OpenMP
// variants, plus end-to-end solver timings at the paper-scale resolution.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "deconv/experiments.hpp"
#include "deconv/kernels.hpp"
#include "deconv/runtime.hpp"
#include "deconv/volterra.hpp"

using namespace deconv;
using namespace deconv::kernels;

namespace {

template <typename F>
double best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

} // namespace

int main() {
    std::printf("threads: %d\n", runtime::max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    {
        Grid g(1.0, 1200, GridStyle::midpoint);
        ConvRowSpec spec{[](double t) { return std::exp(t); },
                         [](double t) { return std::exp(t); }, 4};
        LowerTri w;
        report("conv weight build n=1200",
               best_of(3, [&] { conv_rows_serial(g, spec, w); }),
               best_of(3, [&] { conv_rows_parallel(g, spec, w); }));
    }
    {
        Grid g(1.0, 1200, GridStyle::midpoint);
        LowerTri w;
        report("abel weight build n=1200",
               best_of(3, [&] { abel_rows_serial(g, 0.3, w); }),
               best_of(3, [&] { abel_rows_parallel(g, 0.3, w); }));
    }
    {
        const std::size_t n = 3000;
        LowerTri w(n);
        std::mt19937 rng(1);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) w.at(i, j) = dist(rng);
        std::vector<double> x(n, 1.0), y(n);
        report("triangular matvec n=3000",
               best_of(5, [&] { apply_serial(w, x, y); }),
               best_of(5, [&] { apply_parallel(w, x, y); }));

    }
    {
        const std::size_t n = 1200;
        LowerTri w(n);
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) w.at(i, j) = dist(rng);
        LowerTri c;
        report("triangular matmul n=1200",
               best_of(2, [&] { matmul_serial(w, w, c); }),
               best_of(2, [&] { matmul_parallel(w, w, c); }));
    }
    {
        const std::size_t n = 600;
        LowerTri k(n);
        std::mt19937 rng(2);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) k.at(i, j) = dist(rng);
        std::vector<double> g;
        report("gram matrix n=600",
               best_of(3, [&] { gram_serial(k, g); }),
               best_of(3, [&] { gram_parallel(k, g); }));
    }

    // end-to-end solves at n = 200 on the built-in problems
    std::printf("\nend-to-end (n = 200, one seeded draw):\n");
    for (int variant = 0; variant < 2; ++variant) {
        const TestProblem p = variant == 0 ? make_exp_problem() : make_abel_problem(0.1);
        const GridSignal f_delta = make_data(p, 0.1, 200, 1);
        RunOptions opts;
        opts.h = variant == 0 ? 0.105 : 0.12;
        const double deconv_ms =
            best_of(5, [&] { (void)run_deconv(p, f_delta, 0.1, 200, opts); });
        const double tikh_ms =
            best_of(5, [&] { (void)run_tikhonov(p, f_delta, 0.1, 200, opts); });
        std::printf("  %-12s deconv %8.2f ms   tikhonov+morozov %8.2f ms\n", p.name.c_str(),
                    deconv_ms, tikh_ms);
    }
    return 0;
}
