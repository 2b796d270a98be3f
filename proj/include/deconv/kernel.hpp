#pragma once

#include <functional>
#include <variant>

#include "deconv/errors.hpp"

namespace deconv {

/// k in C^1 with k(0) != 0. The solver normalizes k(0) = 1 internally.
struct SmoothKernel {
    std::function<double(double)> k;
    std::function<double(double)> k_prime;
    double k0; // k(0)
};

/// k(t) = t^{gamma-1} / Gamma(gamma) + m(t), 0 < gamma < 1, m in C^1.
struct SingularKernel {
    double gamma;
    std::function<double(double)> m;
    std::function<double(double)> m_prime;
    double m0; // m(0)
};

class KernelSpec {
public:
    static KernelSpec smooth(std::function<double(double)> k,
                             std::function<double(double)> k_prime);
    static KernelSpec singular(double gamma,
                               std::function<double(double)> m,
                               std::function<double(double)> m_prime);

    bool is_smooth() const noexcept { return std::holds_alternative<SmoothKernel>(v_); }
    bool is_singular() const noexcept { return !is_smooth(); }

    const SmoothKernel& smooth_part() const;
    const SingularKernel& singular_part() const;

private:
    explicit KernelSpec(std::variant<SmoothKernel, SingularKernel> v) : v_(std::move(v)) {}
    std::variant<SmoothKernel, SingularKernel> v_;
};

} // namespace deconv
