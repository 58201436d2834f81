#pragma once

#include <cstddef>
#include <vector>

#include "fbplab/initial_condition.hpp"

namespace fbp {

/// Uniform spatial window x_i = x0 + i dx, i = 0..nx-1, that can be shifted
/// by whole cells to follow the front.
struct Grid {
    double x0 = -20.0;
    double dx = 0.02;
    std::size_t nx = 3000;
    double window_shift = 0.0;  // cumulative recentering offset

    double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double length() const { return dx * static_cast<double>(nx - 1); }
    double right() const { return x(nx - 1); }

    /// Moves the window k cells to the right.
    void shift(std::ptrdiff_t k) {
        x0 += static_cast<double>(k) * dx;
        window_shift += static_cast<double>(k) * dx;
    }

    /// Throws ParameterError unless dx > 0, nx >= 16 and dx*nx >= 40.
    void validate() const;

    /// Window of the given length with `left_fraction` of it behind x = 0.
    static Grid centred(double dx, double length, double left_fraction = 1.0 / 3.0);
};

/// Samples of the integrated solution U(t, .) on a grid.
struct Profile {
    Grid grid;
    double t = 0.0;
    std::vector<double> values;

    double x(std::size_t i) const { return grid.x(i); }

    /// Linear interpolation, 1 left of the window and 0 right of it.
    double at(double x) const;

    /// Largest increase between consecutive samples (0 for non-increasing data).
    double max_increase() const;

    /// Window brackets the interface: values[0] >= 1 - tol, values[last] <= tol.
    bool brackets(double tol = 1e-6) const;
};

Profile sample_profile(const InitialCondition& ic, const Grid& grid, double t = 0.0);

/// Free boundary L_t sampled at increasing times.
struct FrontTrace {
    std::vector<double> times;
    std::vector<double> positions;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
    void push(double t, double L);

    /// Linear interpolation; throws ParameterError outside [t_first, t_last].
    double at(double t) const;

    bool covers(double t) const { return !empty() && times.front() <= t && t <= times.back() + 1e-12; }

    /// Earliest sample time after which positions never decrease by more
    /// than tol.
    double monotone_from(double tol = 0.0) const;
};

/// Exact linear front L_t = L0 + v t sampled every dt on [0, T].
FrontTrace linear_front(double L0, double v, double T, double dt);

}  // namespace fbp
