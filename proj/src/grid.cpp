#include "fbplab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "fbplab/errors.hpp"

namespace fbp {

void Grid::validate() const {
    if (!(dx > 0.0)) throw ParameterError("grid spacing dx must be positive");
    if (nx < 16) throw ParameterError("grid needs at least 16 points");
    if (dx * static_cast<double>(nx) < 40.0) {
        throw ParameterError("grid window dx*nx must be at least 40 space units");
    }
}

Grid Grid::centred(double dx, double length, double left_fraction) {
    Grid g;
    g.dx = dx;
    g.nx = static_cast<std::size_t>(std::ceil(length / dx)) + 1;
    g.x0 = -std::round(left_fraction * length / dx) * dx;
    g.window_shift = 0.0;
    return g;
}

double Profile::at(double x) const {
    const double s = (x - grid.x0) / grid.dx;
    if (s <= 0.0) return s == 0.0 ? values.front() : 1.0;
    const auto n = values.size();
    if (s >= static_cast<double>(n - 1)) return s == static_cast<double>(n - 1) ? values.back() : 0.0;
    const auto i = static_cast<std::size_t>(s);
    const double w = s - static_cast<double>(i);
    return (1.0 - w) * values[i] + w * values[i + 1];
}

double Profile::max_increase() const {
    double worst = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) worst = std::max(worst, values[i] - values[i - 1]);
    return worst;
}

bool Profile::brackets(double tol) const {
    return !values.empty() && values.front() >= 1.0 - tol && values.back() <= tol;
}

Profile sample_profile(const InitialCondition& ic, const Grid& grid, double t) {
    Profile p{grid, t, std::vector<double>(grid.nx)};
    for (std::size_t i = 0; i < grid.nx; ++i) p.values[i] = eval(ic, grid.x(i));
    return p;
}

void FrontTrace::push(double t, double L) {
    if (!times.empty() && !(t > times.back())) throw ParameterError("front trace times must increase");
    times.push_back(t);
    positions.push_back(L);
}

double FrontTrace::at(double t) const {
    if (!covers(t)) throw ParameterError("front trace does not cover requested time");
    if (t >= times.back()) return positions.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto i = static_cast<std::size_t>(it - times.begin()) - 1;
    const double w = (t - times[i]) / (times[i + 1] - times[i]);
    return (1.0 - w) * positions[i] + w * positions[i + 1];
}

double FrontTrace::monotone_from(double tol) const {
    if (empty()) return 0.0;
    // scan backwards for the last decrease
    double running_min = positions.back();
    for (std::size_t k = size(); k-- > 0;) {
        if (positions[k] > running_min + tol) return times[std::min(k + 1, size() - 1)];
        running_min = std::min(running_min, positions[k]);
    }
    return times.front();
}

FrontTrace linear_front(double L0, double v, double T, double dt) {
    FrontTrace f;
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * dt;
        f.push(t, L0 + v * t);
    }
    return f;
}

}  // namespace fbp
