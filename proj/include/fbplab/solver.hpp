#pragma once

// Finite-difference solvers for the integrated free boundary problem
//
//   dU/dt = (1/2) U_xx + U   on x > L_t,   U = 1 on x <= L_t,
//
// on a moving window. Diffusion is treated implicitly (backward Euler,
// unconditionally stable), the reaction explicitly. Two closures are offered:
//
//  * obstacle: after each step U <- min(U, 1); the contact set {U = 1} is the
//    region left of the free boundary.
//  * penalized: reaction U - U^n with no clamp; U_n increases to U as n grows.

#include <cstddef>
#include <optional>
#include <vector>

#include "fbplab/grid.hpp"
#include "fbplab/initial_condition.hpp"

namespace fbp::solver {

inline constexpr double kDefaultEps = 1e-6;

enum class FrontMethod {
    /// Linear interpolation of U at the 1 - eps level.
    Level,
    /// 1 - eps crossing located by linear extrapolation of sqrt(1 - U) from
    /// the two nearest samples ahead of the contact set. sqrt(1 - U) is
    /// linear in x next to a quadratic contact, so this is second order.
    ContactSqrt,
    /// Fit of 1 - U = (x - L)^2 + a3 (x - L)^3 + a4 (x - L)^4 + a5 (x - L)^5
    /// to the samples 0.1..0.6 ahead of the contact (the x^2 coefficient is
    /// exact: U_xx = -2 at the boundary), plus sqrt(eps) for the level.
    /// Insensitive to the O(dx^2) errors of the scheme next to the contact,
    /// which ContactSqrt turns into O(dx) front errors. Falls back to
    /// ContactSqrt when the window has too few samples or the fit is poor.
    FreeSideFit,
};

struct SolveOptions {
    double T = 1.0;
    double dt = 0.0;      // 0 selects min(0.5 dx^2, 1e-3)
    double dt_out = 0.01; // front sampling interval
    std::vector<double> snapshot_times;
    double eps = kDefaultEps;
    FrontMethod front_method = FrontMethod::FreeSideFit;
    bool recenter = true;
    /// Right-edge data from the free solution e^t (G_t * U0) instead of 0.
    bool far_field = true;
    // Fractions of the window. Behind the front U = 1 and little room is
    // needed; ahead of it a pulled front feels a zero edge at distance D as
    // a speed deficit ~ pi^2 / (2 sqrt2 D^2) once sqrt(t) is comparable to D.
    double recenter_trigger = 0.4;
    double recenter_target = 0.2;
};

struct SolveResult {
    std::vector<Profile> snapshots;
    FrontTrace front;
    Profile final_profile;
    double eps = kDefaultEps;
    double dt = 0.0;
    std::size_t steps = 0;
    std::size_t recenterings = 0;
};

/// Time step actually used for the given grid and options.
double effective_dt(const Grid& grid, const SolveOptions& opt);

/// Obstacle (projection) scheme; the production solver.
SolveResult solve_obstacle(const InitialCondition& ic, const Grid& grid, const SolveOptions& opt);

/// Penalized approximation dU/dt = U_xx/2 + U - U^n, n >= 2.
SolveResult solve_penalized(const InitialCondition& ic, const Grid& grid, int n, const SolveOptions& opt);

/// Position of the 1 - eps crossing. Throws WindowError when the profile has
/// no crossing strictly inside the window.
double extract_front(const Profile& profile, double eps = kDefaultEps,
                     FrontMethod method = FrontMethod::FreeSideFit);

struct BoundarySlope {
    double first = 0.0;   // target 0
    double second = 0.0;  // target -2
};

/// One-sided derivatives of U at the front from a cubic through the four
/// samples ahead of it.
BoundarySlope boundary_slope_diagnostics(const Profile& profile, double front);

/// Integral of -U_x over the window (trapezoid on centred differences);
/// equals the total mass of u = -U_x, which should stay 1.
double window_mass(const Profile& profile);

/// max_x |U(x) - reference(x - front)| over window points with x - front in
/// [lo, hi].
template <class F>
double max_deviation_from(const Profile& p, double front, F reference, double lo, double hi) {
    double worst = 0.0;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        const double y = p.x(i) - front;
        if (y < lo || y > hi) continue;
        const double d = p.values[i] - reference(y);
        worst = d > worst ? d : (-d > worst ? -d : worst);
    }
    return worst;
}

}  // namespace fbp::solver
