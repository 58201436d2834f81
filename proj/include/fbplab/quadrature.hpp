#pragma once

#include <functional>
#include <span>

namespace fbp::quad {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod on [a, b]; b may be +infinity.
QuadResult integrate(const Integrand& f, double a, double b, double rel_tol = 1e-11,
                     unsigned max_depth = 18);

/// Same as integrate() but splits at the given interior breakpoints
/// (kinks or jumps of the integrand). Breakpoints outside (a, b) are ignored.
QuadResult integrate_split(const Integrand& f, double a, double b,
                           std::span<const double> breakpoints, double rel_tol = 1e-11);

}  // namespace fbp::quad
