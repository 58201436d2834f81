#pragma once

// Closed-form travelling waves of the free boundary problem and of its
// beta-generalisation. All functions are pure and thread-safe.

#include <optional>

namespace fbp::waves {

inline constexpr double kSqrt2 = 1.41421356237309504880;

/// Speeds within this distance of sqrt(2) use the degenerate closed form.
inline constexpr double kDegenerateTol = 1e-12;

/// Speed together with the decay rates of the two exponential modes.
struct WaveParams {
    double c = kSqrt2;
    std::optional<double> beta;
    double a_c = kSqrt2;  // c - sqrt(c^2 - 2)
    double b_c = kSqrt2;  // c + sqrt(c^2 - 2)

    /// 1 / (2 sqrt(c^2 - 2)); infinite at the minimal speed.
    double Z_c() const;
    bool degenerate() const;

    static WaveParams make(double c, std::optional<double> beta = std::nullopt);
};

/// Density pi_c(y) of the speed-c wave, zero for y <= 0.
double pi_c(double c, double y);

/// CCDF Pi_c(x) = integral of pi_c over [x, inf); equals 1 for x <= 0.
double Pi_c(double c, double x);

/// Derivative of pi_c for y > 0 (zero for y <= 0).
double pi_c_prime(double c, double y);

/// Minimal speed of a non-negative wave for boundary slope beta.
double c_beta_min(double beta);

/// Pi_c(x) - (beta/2) pi_c(x) for x > 0, 1 for x <= 0.
double Pi_beta_c(double beta, double c, double x);

/// Pi_beta_c at the minimal speed c_beta_min(beta).
double Pi_beta_min(double beta, double x);

/// True when Pi_beta_c is a physical (non-negative) profile.
bool beta_wave_nonnegative(double beta, double c);

}  // namespace fbp::waves
