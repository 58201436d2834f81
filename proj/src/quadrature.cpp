#include "fbplab/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

namespace fbp::quad {

QuadResult integrate(const Integrand& f, double a, double b, double rel_tol, unsigned max_depth) {
    QuadResult r;
    if (a == b) return r;
    double l1 = 0.0;
    r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, max_depth, rel_tol, &r.error, &l1);
    return r;
}

QuadResult integrate_split(const Integrand& f, double a, double b,
                           std::span<const double> breakpoints, double rel_tol) {
    std::vector<double> pts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) pts.push_back(p);
    }
    std::sort(pts.begin() + 1, pts.end());
    pts.push_back(b);
    QuadResult total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const auto part = integrate(f, pts[i], pts[i + 1], rel_tol);
        total.value += part.value;
        total.error += part.error;
    }
    return total;
}

}  // namespace fbp::quad
