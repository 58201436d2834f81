#pragma once

// Both sides of the Brunet-Derrida relation
//
//   int_{L0}^inf U0(x) e^{r x} dx
//       = -e^{r L0} / r + (1/r) int_0^inf e^{r L_t - (1 + r^2/2) t} dt,
//
// valid for r < sqrt(2), r != 0, and the r0 speed law. Divergent sides are
// reported as +infinity.

#include <filesystem>
#include <optional>
#include <vector>

#include "fbplab/grid.hpp"
#include "fbplab/initial_condition.hpp"

namespace fbp::bd {

/// Throws DomainError unless r is finite, r != 0 and r < sqrt(2).
void check_r(double r);

/// Left-hand side; +inf when the exponential moment diverges.
double bd_lhs(const InitialCondition& ic, double r);

struct RhsResult {
    double value = 0.0;          // +inf when the tail diverges
    double quad_error = 0.0;     // |I(h) - I(2h)| on [0, T], scaled by 1/|r|
    double tail_fraction = 0.0;  // tail share of the time integral
    double tail_speed = 0.0;
};

/// Default tail speed (L_T - L_{T/2}) / (T/2).
double fitted_tail_speed(const FrontTrace& front);

/// Right-hand side from a sampled front. The exponent is linear between
/// samples and is integrated exactly there; beyond T the front is extended
/// with speed `tail_speed` (fitted when absent).
RhsResult bd_rhs(const FrontTrace& front, double L0, double r, std::optional<double> tail_speed = std::nullopt);

struct BDReport {
    double r = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_err = 0.0;
    double tail_fraction = 0.0;
    double quad_error = 0.0;
    bool pass = false;
};

inline constexpr double kRelTol = 0.02;
inline constexpr double kMaxTailFraction = 0.05;
inline constexpr double kDegenerateAtol = 1e-3;

/// Compares both sides. Relative error is |lhs - rhs| / max(|lhs|, 0.1);
/// when lhs == 0 the absolute gap is compared to kDegenerateAtol instead.
/// Two infinite sides agree.
BDReport bd_check(const InitialCondition& ic, const FrontTrace& front, double r, double rel_tol = kRelTol);

/// sup({0} u {r in (0, sqrt 2) : int U0 e^{r x} < inf}).
double r0_of(const InitialCondition& ic);

/// 1/r0 + r0/2; +inf for r0 = 0. Throws DomainError outside [0, sqrt 2].
double speed_from_r0(double r0);

/// CSV with header r,lhs,rhs,rel_err,tail_fraction,verdict (verdict 1/0).
void write_report(const std::filesystem::path& path, const std::vector<BDReport>& rows);

}  // namespace fbp::bd
