#include "fbplab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "fbplab/asymptotics.hpp"
#include "fbplab/errors.hpp"
#include "fbplab/waves.hpp"

namespace fbp::solver {
namespace {

// Factorisation of the constant-coefficient tridiagonal matrix
// (1 + 2a) u_i - a (u_{i-1} + u_{i+1}) on the interior points.
class ImplicitDiffusion {
public:
    ImplicitDiffusion(std::size_t m, double alpha) : alpha_(alpha), cp_(m), inv_den_(m) {
        const double diag = 1.0 + 2.0 * alpha;
        double prev_cp = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double den = diag + alpha * prev_cp;
            inv_den_[k] = 1.0 / den;
            cp_[k] = -alpha * inv_den_[k];
            prev_cp = cp_[k];
        }
    }

    // Solves in place for u[1..m]; u[0] and u[m+1] are Dirichlet values and
    // rhs occupies u[1..m] on entry.
    void solve(std::vector<double>& u) const {
        const std::size_t m = cp_.size();
        u[1] += alpha_ * u[0];
        u[m] += alpha_ * u[m + 1];
        double prev = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            prev = (u[k + 1] + alpha_ * prev) * inv_den_[k];
            u[k + 1] = prev;
        }
        for (std::size_t k = m - 1; k-- > 0;) u[k + 1] -= cp_[k] * u[k + 2];
    }

private:
    double alpha_;
    std::vector<double> cp_;
    std::vector<double> inv_den_;
};

double ipow(double u, int n) {
    double result = 1.0;
    while (n > 0) {
        if (n & 1) result *= u;
        u *= u;
        n >>= 1;
    }
    return result;
}

struct Schedule {
    double dt;
    std::size_t steps_per_out;
    std::size_t n_out;
};

Schedule make_schedule(const Grid& grid, const SolveOptions& opt) {
    if (!(opt.T >= 0.0)) throw ParameterError("horizon T must be non-negative");
    if (!(opt.dt_out > 0.0)) throw ParameterError("dt_out must be positive");
    const double dt0 = effective_dt(grid, opt);
    Schedule s{};
    s.n_out = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(opt.T / opt.dt_out)));
    const double dt_out = opt.T > 0.0 ? opt.T / static_cast<double>(s.n_out) : opt.dt_out;
    s.steps_per_out = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(dt_out / dt0 - 1e-9)));
    s.dt = dt_out / static_cast<double>(s.steps_per_out);
    if (opt.T == 0.0) s.n_out = 0;
    return s;
}

enum class Closure { Obstacle, Penalized };

constexpr double kFitInner = 0.1;
// A front pinned by the zero Dirichlet edge stalls about pi/(2 sqrt2) short
// of it; without recentering, stop before that happens.
constexpr double kEdgeMargin = 3.0;
constexpr double kFitOuter = 0.6;
constexpr double kFitMaxRms = 1e-3;

// Far ahead of the front U agrees with the free solution e^t (G_t * U0)
// up to corrections that decay faster than the tail of U0; used as
// Dirichlet data on the right edge and to fill cells exposed by a shift.
// Without it a slowly decaying tail is cut off by the window and the front
// falls back to the pulled speed. For tails at least as steep as e^{-sqrt2 x}
// the free solution is below e^{-28} at the right edge and 0 is kept.
constexpr double kNoData = -std::numeric_limits<double>::infinity();

bool needs_far_field(const InitialCondition& ic) { return tail_rate(ic) < waves::kSqrt2; }

double log_far_field(const InitialCondition& ic, double t, double x) {
    if (t <= 0.0) return std::log(eval(ic, x));
    return std::min(0.0, asym::log_heat_growth(ic, t, x));
}

SolveResult run(const InitialCondition& ic, const Grid& grid0, const SolveOptions& opt, Closure closure,
                int n) {
    grid0.validate();
    validate(ic);
    if (!(opt.eps > 0.0 && opt.eps < 0.5)) throw ParameterError("front threshold eps must lie in (0, 1/2)");
    const Schedule sched = make_schedule(grid0, opt);

    SolveResult res;
    res.eps = opt.eps;
    res.dt = sched.dt;

    Profile prof = sample_profile(ic, grid0, 0.0);
    if (!prof.brackets()) {
        throw WindowError("initial data does not fall below 1e-6 inside the window; widen the grid");
    }
    const bool far_field = opt.far_field && needs_far_field(ic);
    prof.values.front() = 1.0;
    if (!far_field) prof.values.back() = 0.0;
    Grid& grid = prof.grid;
    std::vector<double>& u = prof.values;
    const std::size_t nx = grid.nx;

    std::vector<std::size_t> snap_steps;
    for (double ts : opt.snapshot_times) {
        if (ts < 0.0 || ts > opt.T + 1e-12) throw ParameterError("snapshot time outside [0, T]");
        snap_steps.push_back(static_cast<std::size_t>(std::llround(ts / sched.dt)));
    }
    std::vector<bool> taken(snap_steps.size(), false);
    auto take_snapshots = [&](std::size_t step) {
        for (std::size_t k = 0; k < snap_steps.size(); ++k) {
            if (!taken[k] && snap_steps[k] == step) {
                res.snapshots.push_back(prof);
                taken[k] = true;
            }
        }
    };

    res.front.push(0.0, left_edge(ic));
    take_snapshots(0);

    const ImplicitDiffusion diffusion(nx - 2, 0.5 * sched.dt / (grid.dx * grid.dx));
    const double dt = sched.dt;
    std::size_t step = 0;

    double log_right = log_far_field(ic, 0.0, grid.right());
    for (std::size_t out = 1; out <= sched.n_out; ++out) {
        const double t_start = prof.t;
        const double t_end = t_start + dt * static_cast<double>(sched.steps_per_out);
        const double log_right_end = far_field ? log_far_field(ic, t_end, grid.right()) : kNoData;
        for (std::size_t k = 0; k < sched.steps_per_out; ++k) {
            ++step;
            if (far_field) {
                const double w = static_cast<double>(k + 1) / static_cast<double>(sched.steps_per_out);
                const bool finite = log_right != kNoData && log_right_end != kNoData;
                const double l = finite ? (1.0 - w) * log_right + w * log_right_end : (w < 1.0 ? kNoData : log_right_end);
                u[nx - 1] = std::exp(l);
            }
            if (closure == Closure::Obstacle) {
                for (std::size_t i = 1; i + 1 < nx; ++i) u[i] += dt * u[i];
            } else {
                for (std::size_t i = 1; i + 1 < nx; ++i) u[i] += dt * (u[i] - ipow(u[i], n));
            }
            diffusion.solve(u);
            double lo = 0.0, hi = 0.0;
            if (closure == Closure::Obstacle) {
                for (std::size_t i = 1; i + 1 < nx; ++i) {
                    u[i] = std::min(u[i], 1.0);
                    lo = std::min(lo, u[i]);
                }
            } else {
                for (std::size_t i = 1; i + 1 < nx; ++i) {
                    lo = std::min(lo, u[i]);
                    hi = std::max(hi, u[i]);
                }
            }
            if (lo < -1e-6 || hi > 1.0 + 1e-6) {
                throw InstabilityError("profile left [-1e-6, 1 + 1e-6] at step " + std::to_string(step) +
                                       " (t = " + std::to_string(static_cast<double>(step) * dt) + ")");
            }
            prof.t = static_cast<double>(step) * dt;
            take_snapshots(step);
        }
        log_right = log_right_end;

        const double L = extract_front(prof, opt.eps, opt.front_method);
        res.front.push(prof.t, L);

        if (opt.recenter && L > grid.x0 + opt.recenter_trigger * grid.length()) {
            const double target = grid.x0 + opt.recenter_target * grid.length();
            const auto shift = static_cast<std::size_t>(std::llround((L - target) / grid.dx));
            if (shift > 0) {
                std::copy(u.begin() + static_cast<std::ptrdiff_t>(shift), u.end(), u.begin());
                grid.shift(static_cast<std::ptrdiff_t>(shift));
                for (std::size_t i = nx - shift; i < nx; ++i) {
                    u[i] = far_field ? std::min(u[i - 1], std::exp(log_far_field(ic, prof.t, grid.x(i)))) : 0.0;
                }
                log_right = far_field ? log_far_field(ic, prof.t, grid.right()) : kNoData;
                ++res.recenterings;
            }
        } else if (L > grid.right() - std::max(4.0 * grid.dx, kEdgeMargin)) {
            throw WindowError("front reached the right edge of the window at t = " + std::to_string(prof.t));
        }
    }
    res.steps = step;
    res.final_profile = std::move(prof);
    return res;
}

}  // namespace

double effective_dt(const Grid& grid, const SolveOptions& opt) {
    if (opt.dt > 0.0) return opt.dt;
    return std::min(0.5 * grid.dx * grid.dx, 1e-3);
}

SolveResult solve_obstacle(const InitialCondition& ic, const Grid& grid, const SolveOptions& opt) {
    return run(ic, grid, opt, Closure::Obstacle, 0);
}

SolveResult solve_penalized(const InitialCondition& ic, const Grid& grid, int n, const SolveOptions& opt) {
    if (n < 2) throw ParameterError("penalization exponent n must be >= 2");
    const double dt = effective_dt(grid, opt);
    if (dt * (n - 1) > 1.0) {
        throw ParameterError("dt exceeds the explicit reaction stability bound 1/(n-1)");
    }
    return run(ic, grid, opt, Closure::Penalized, n);
}

namespace {

// Free-side model of the profile next to a quadratic contact:
// 1 - U = y^2 + a3 y^3 + a4 y^4 + a5 y^5, y = x - L. The y^2 coefficient is
// fixed by the equation (U_xx = -2 at the boundary). For a trial L the a_k
// follow by linear least squares; returns the residual sum of squares.
double contact_residual(const std::vector<double>& s, const std::vector<double>& w, double d) {
    // basis scaled to O(1) and solved by QR: the normal equations of
    // y^3, y^4, y^5 on a short interval are too ill-conditioned, and their
    // rounding noise makes the minimum in d wander by ~1e-4
    const auto n = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd B(n, 3);
    Eigen::VectorXd r(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double y = s[static_cast<std::size_t>(k)] - d;
        const double z = y / kFitOuter;
        B(k, 0) = z * z * z;
        B(k, 1) = B(k, 0) * z;
        B(k, 2) = B(k, 1) * z;
        r(k) = w[static_cast<std::size_t>(k)] - y * y;
    }
    const Eigen::VectorXd coef = B.householderQr().solve(r);
    return (r - B * coef).squaredNorm();
}

}  // namespace

double extract_front(const Profile& profile, double eps, FrontMethod method) {
    if (!(eps > 0.0 && eps < 0.5)) throw ParameterError("front threshold eps must lie in (0, 1/2)");
    const auto& u = profile.values;
    const double level = 1.0 - eps;
    // first sample strictly below the level (values are non-increasing)
    const auto it = std::partition_point(u.begin(), u.end(), [level](double v) { return v >= level; });
    const auto j = static_cast<std::size_t>(it - u.begin());
    if (j == 0 || j >= u.size()) throw WindowError("no 1 - eps crossing inside the window");
    const double dx = profile.grid.dx;
    const double x_lo = profile.x(j - 1);

    auto linear = [&] { return x_lo + (u[j - 1] - level) / (u[j - 1] - u[j]) * dx; };

    auto contact_sqrt = [&] {
        if (j + 1 >= u.size()) return linear();
        const double s0 = std::sqrt(1.0 - u[j]);
        const double s1 = std::sqrt(std::max(0.0, 1.0 - u[j + 1]));
        const double root_eps = std::sqrt(eps);
        if (!(s1 > s0)) return linear();
        const double x = profile.x(j) - (s0 - root_eps) / (s1 - s0) * dx;
        return std::clamp(x, x_lo, profile.x(j));
    };

    if (method == FrontMethod::Level) return linear();
    if (method == FrontMethod::ContactSqrt) return contact_sqrt();

    // FreeSideFit: samples with 1 - U in the model range, away from the
    // O(dx^2) contact errors of the scheme
    const double x_j = profile.x(j);
    std::vector<double> sv, wv;
    // offsets from the node index, so that the sample set does not depend
    // on rounding of the window origin
    const double slack = 1e-9 * dx;
    for (std::size_t i = j; i < u.size(); ++i) {
        const double y = static_cast<double>(i - j) * dx;
        if (y > kFitOuter + slack) break;
        if (y >= kFitInner - slack) {
            sv.push_back(y);
            wv.push_back(1.0 - u[i]);
        }
    }
    if (sv.size() < 5) return contact_sqrt();
    // golden-section search for the offset d = L - x_j
    double a = -3.0 * dx, b = dx;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - g * (b - a), c2 = a + g * (b - a);
    double f1 = contact_residual(sv, wv, c1), f2 = contact_residual(sv, wv, c2);
    while (b - a > 1e-9 * std::max(1.0, dx)) {
        if (f1 < f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - g * (b - a);
            f1 = contact_residual(sv, wv, c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + g * (b - a);
            f2 = contact_residual(sv, wv, c2);
        }
    }
    const double d = 0.5 * (a + b);
    const double rms = std::sqrt(contact_residual(sv, wv, d) / static_cast<double>(sv.size()));
    // profile not yet of contact type (very early times): local method
    if (rms > kFitMaxRms || d <= -3.0 * dx + 1e-6 || d >= dx - 1e-6) return contact_sqrt();
    // 1 - eps crossing of the model: y^2 ~ eps to leading order
    return x_j + d + std::sqrt(eps);
}

BoundarySlope boundary_slope_diagnostics(const Profile& profile, double front) {
    const auto& u = profile.values;
    const double dx = profile.grid.dx;
    auto first = static_cast<std::size_t>(std::floor((front - profile.grid.x0) / dx)) + 1;
    while (first < u.size() && u[first] >= 1.0) ++first;  // skip contact samples
    if (first + 3 >= u.size()) return {};
    // Newton form of the cubic through (z_k, u_k) with z measured from the front
    double z[4], c[4];
    for (int k = 0; k < 4; ++k) {
        z[k] = profile.x(first + static_cast<std::size_t>(k)) - front;
        c[k] = u[first + static_cast<std::size_t>(k)];
    }
    for (int level = 1; level < 4; ++level) {
        for (int k = 3; k >= level; --k) c[k] = (c[k] - c[k - 1]) / (z[k] - z[k - level]);
    }
    // p(s) = c0 + c1 (s-z0) + c2 (s-z0)(s-z1) + c3 (s-z0)(s-z1)(s-z2); evaluate p', p'' at s = 0
    const double a0 = -z[0], a1 = -z[1], a2 = -z[2];
    BoundarySlope d;
    d.first = c[1] + c[2] * (a0 + a1) + c[3] * (a0 * a1 + a0 * a2 + a1 * a2);
    d.second = 2.0 * c[2] + 2.0 * c[3] * (a0 + a1 + a2);
    return d;
}

double window_mass(const Profile& profile) {
    const auto& u = profile.values;
    const std::size_t n = u.size();
    if (n < 3) return 0.0;
    const double dx = profile.grid.dx;
    std::vector<double> density(n);
    density[0] = -(u[1] - u[0]) / dx;
    density[n - 1] = -(u[n - 1] - u[n - 2]) / dx;
    for (std::size_t i = 1; i + 1 < n; ++i) density[i] = -(u[i + 1] - u[i - 1]) / (2.0 * dx);
    double mass = 0.5 * (density[0] + density[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) mass += density[i];
    return mass * dx;
}

}  // namespace fbp::solver
