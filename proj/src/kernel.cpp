#include "deconv/kernel.hpp"

#include <cmath>

namespace deconv {

KernelSpec KernelSpec::smooth(std::function<double(double)> k,
                              std::function<double(double)> k_prime) {
    if (!k || !k_prime) throw ConfigError("KernelSpec::smooth: k and k' are required");
    const double k0 = k(0.0);
    if (!std::isfinite(k0) || k0 == 0.0)
        throw ConfigError("KernelSpec::smooth: k(0) must be finite and nonzero");
    return KernelSpec{SmoothKernel{std::move(k), std::move(k_prime), k0}};
}

KernelSpec KernelSpec::singular(double gamma,
                                std::function<double(double)> m,
                                std::function<double(double)> m_prime) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ConfigError("KernelSpec::singular: gamma must lie in (0, 1)");
    if (!m || !m_prime) throw ConfigError("KernelSpec::singular: m and m' are required");
    const double m0 = m(0.0);
    if (!std::isfinite(m0))
        throw ConfigError("KernelSpec::singular: m(0) must be finite");
    return KernelSpec{SingularKernel{gamma, std::move(m), std::move(m_prime), m0}};
}

const SmoothKernel& KernelSpec::smooth_part() const {
    if (!is_smooth()) throw ConfigError("KernelSpec: not a smooth kernel");
    return std::get<SmoothKernel>(v_);
}

const SingularKernel& KernelSpec::singular_part() const {
    if (!is_singular()) throw ConfigError("KernelSpec: not a singular kernel");
    return std::get<SingularKernel>(v_);
}

} // namespace deconv
