#include "fbplab/waves.hpp"

#include <cmath>
#include <limits>

#include "fbplab/errors.hpp"

namespace fbp::waves {
namespace {

void require_speed(double c) {
    if (!(c >= kSqrt2 - kDegenerateTol)) {
        throw DomainError("no real travelling wave for speed c < sqrt(2)");
    }
}

void require_beta(double beta) {
    if (!(beta > 0.0)) {
        throw DomainError("boundary slope beta must be positive");
    }
}

}  // namespace

WaveParams WaveParams::make(double c, std::optional<double> beta) {
    require_speed(c);
    if (beta) require_beta(*beta);
    WaveParams p;
    p.c = c;
    p.beta = beta;
    if (std::abs(c - kSqrt2) <= kDegenerateTol) {
        p.a_c = kSqrt2;
        p.b_c = kSqrt2;
    } else {
        const double s = std::sqrt(c * c - 2.0);
        // a_c = 2 / b_c avoids cancellation in c - s for large c.
        p.b_c = c + s;
        p.a_c = 2.0 / p.b_c;
    }
    return p;
}

bool WaveParams::degenerate() const { return std::abs(c - kSqrt2) <= kDegenerateTol; }

double WaveParams::Z_c() const {
    if (degenerate()) return std::numeric_limits<double>::infinity();
    return 1.0 / (b_c - a_c);
}

double pi_c(double c, double y) {
    const auto p = WaveParams::make(c);
    if (y <= 0.0) return 0.0;
    if (p.degenerate()) return 2.0 * y * std::exp(-kSqrt2 * y);
    const double d = p.b_c - p.a_c;  // 2 sqrt(c^2 - 2)
    return (2.0 / d) * std::exp(-p.a_c * y) * -std::expm1(-d * y);
}

double pi_c_prime(double c, double y) {
    const auto p = WaveParams::make(c);
    if (y <= 0.0) return 0.0;
    if (p.degenerate()) return 2.0 * (1.0 - kSqrt2 * y) * std::exp(-kSqrt2 * y);
    const double d = p.b_c - p.a_c;
    return std::exp(-p.a_c * y) * (2.0 + (2.0 * p.b_c / d) * std::expm1(-d * y));
}

double Pi_c(double c, double x) {
    const auto p = WaveParams::make(c);
    if (x <= 0.0) return 1.0;
    if (p.degenerate()) return (kSqrt2 * x + 1.0) * std::exp(-kSqrt2 * x);
    // Z_c [b e^{-a x} - a e^{-b x}] = e^{-a x} [1 + a (1 - e^{-d x}) / d]
    const double d = p.b_c - p.a_c;
    return std::exp(-p.a_c * x) * (1.0 + p.a_c * (-std::expm1(-d * x)) / d);
}

double c_beta_min(double beta) {
    require_beta(beta);
    if (beta <= kSqrt2) return kSqrt2;
    return beta / 2.0 + 1.0 / beta;
}

double Pi_beta_c(double beta, double c, double x) {
    require_beta(beta);
    require_speed(c);
    if (x <= 0.0) return 1.0;
    // In the pushed regime at the minimal speed, a_c = 2/beta and the slow
    // mode cancels exactly, leaving e^{-beta x}. Rounding in the generic
    // expression would otherwise resurrect it in the far tail.
    if (beta > kSqrt2 && std::abs(c - c_beta_min(beta)) <= kDegenerateTol) {
        return std::exp(-beta * x);
    }
    return Pi_c(c, x) - 0.5 * beta * pi_c(c, x);
}

double Pi_beta_min(double beta, double x) { return Pi_beta_c(beta, c_beta_min(beta), x); }

bool beta_wave_nonnegative(double beta, double c) {
    require_beta(beta);
    require_speed(c);
    return c >= c_beta_min(beta) - 1e-9;
}

}  // namespace fbp::waves
