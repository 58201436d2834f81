#pragma once

// Admissible initial data U0: non-increasing, [0,1]-valued, equal to 1 on a
// half-line (-inf, L0] and vanishing at +inf. Each variant is evaluated in
// closed form except Tabulated (piecewise linear).

#include <limits>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace fbp {

/// U0(x) = 1{x < 0}; u0 is a unit atom at the origin.
struct Heaviside {};

/// U0(x) = min(1, A x^nu e^{-lam x}) right of the largest root x* of
/// A x^nu e^{-lam x} = 1, and 1 to its left.
struct PowerExpTail {
    double A = 1.0;
    double nu = 0.0;
    double lam = 1.0;
};

/// U0 = Pi_c, the speed-c travelling wave.
struct Wave {
    double c = 1.41421356237309504880;
};

/// U0 = Pi^(beta)_min, the minimal non-negative wave of the beta-problem.
struct BetaWave {
    double beta = 1.0;
};

/// U0(x) = (b e^{-a x} - a e^{-b x}) / (b - a) for x > 0, 1 for x <= 0;
/// (1 + a x) e^{-a x} when a == b. Image of exponential data under the
/// V -> U mapping.
struct TwoRate {
    double a = 1.0;
    double b = 2.0;
};

/// Piecewise-linear table, constant extension to the left, 0 to the right.
struct Tabulated {
    std::vector<double> xs;
    std::vector<double> us;
};

using InitialCondition = std::variant<Heaviside, PowerExpTail, Wave, BetaWave, TwoRate, Tabulated>;

/// Throws ValidationError when ic violates the standing assumptions
/// (values in [0,1], non-increasing, finite L0, decay at +inf).
void validate(const InitialCondition& ic);

double eval(const InitialCondition& ic, double x);

/// log U0(x), accurate far into the tail where U0 itself underflows.
double log_eval(const InitialCondition& ic, double x);

/// L0 = inf{x : U0(x) < 1}.
double left_edge(const InitialCondition& ic);

/// Largest root x* of A x^nu e^{-lam x} = 1.
double power_exp_root(const PowerExpTail& p);

/// Exponential decay rate of the tail (+inf for compactly supported u0).
double tail_rate(const InitialCondition& ic);

/// Power of x multiplying e^{-rate x} in the tail (0 when not applicable).
double tail_power(const InitialCondition& ic);

/// Points where U0 has a kink or jump; used to split quadratures.
std::vector<double> breakpoints(const InitialCondition& ic);

/// x beyond which U0 < tol.
double right_extent(const InitialCondition& ic, double tol = 1e-16);

/// Inverse-transform sample from the probability measure u0 = -dU0.
double sample(const InitialCondition& ic, std::mt19937_64& rng);

/// Short textual form: heaviside | powexp:A,nu,lam | wave:c | betawave:beta |
/// tworate:a,b | table:<csv path>.
InitialCondition parse_ic(const std::string& spec);
std::string format_ic(const InitialCondition& ic);

std::string ic_name(const InitialCondition& ic);

}  // namespace fbp
