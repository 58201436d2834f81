#pragma once

// Predicted front positions for the free boundary problem and least-squares
// fitting of solver traces against them.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fbplab/grid.hpp"
#include "fbplab/initial_condition.hpp"

namespace fbp::asym {

inline constexpr double kBramsonLogCoeff = -1.06066017177982128660;  // -3 / (2 sqrt 2)

/// -(1/sqrt 2) log sqrt(pi): O(1) constant of the infinite-mass case.
double infinite_mass_constant();

enum class Regime {
    FiniteMassPulled,
    InfiniteMassPulled,
    SlowerDecay,
    HeavyTail,
    PushmiPullyu,
    Pushed,
};

std::string regime_name(Regime r);

/// m(t) = linear t + log_coeff log t + loglog_coeff log log t + constant.
/// An absent constant is unknown: it is never fabricated, only fitted.
struct AsymptoticPrediction {
    Regime regime = Regime::FiniteMassPulled;
    double linear = 0.0;
    double log_coeff = 0.0;
    double loglog_coeff = 0.0;
    std::optional<double> constant;
    std::vector<std::pair<double, double>> b_curve;  // sampled (t, b(t)) when used
    std::string note;                                // e.g. divergence statements

    /// Template without the constant.
    double shape(double t) const;
    /// shape(t) + constant (0 when unknown).
    double position(double t) const;
};

/// True when int_0^inf y e^{sqrt2 y} U0(y) dy < inf.
bool finite_mass(const InitialCondition& ic);

/// b(t) = 2^{-1/2} log(int_0^Y y e^{sqrt2 y} U0(y) e^{-y^2/(2t)} dy + 1),
/// Y = 10 sqrt(t) + 50. Throws PrecisionError if the quadrature does not
/// converge.
double b_of_t(const InitialCondition& ic, double t);

/// Truncation point used by b_of_t.
double b_truncation(double t);

enum class MassCase { Finite, Infinite };

/// sqrt2 t - (3/(2 sqrt2)) log t + b(t), plus -(1/sqrt2) log sqrt(pi) in the
/// infinite-mass case. The finite-mass constant is unknown and omitted.
double m_pulled(const InitialCondition& ic, double t, MassCase mass_case);

/// Pulled template with b(t) sampled at `times` (constant per mass_case).
AsymptoticPrediction pulled_prediction(const InitialCondition& ic, MassCase mass_case,
                                       const std::vector<double>& times = {});

/// log of e^t (G_t * U0)(x), G_t the heat kernel of variance t.
double log_heat_growth(const InitialCondition& ic, double t, double x);

/// sup{x : e^t (G_t * U0)(x) >= 1}. Throws WindowError if no bracket is found.
double m_slow_decay(const InitialCondition& ic, double t);

/// Limiting offset L_t - m_slow_decay(t) for the speed-c wave with c > sqrt 2:
/// (1/a_c)(log sqrt(c^2 - 2) + log a_c).
double slow_decay_offset(double c);

/// int_0^inf y^{1+nu} e^{-y^2/2} dy by quadrature (nu > -2).
double gaussian_moment(double nu);

/// Front asymptotics for U0 ~ A x^nu e^{-sqrt2 x}.
AsymptoticPrediction heavy_tail_prediction(double A, double nu);

struct FitResult {
    double constant = 0.0;  // least-squares constant
    double residual = 0.0;  // max |deviation - constant|
    double spread = 0.0;    // max - min of the deviations
    std::size_t samples = 0;
};

/// Fits positions - shape(t) to a constant over trace samples in [T1, T2].
/// Requires T2 >= 2 T1 >= 2 and the window inside the trace.
FitResult fit_front(const FrontTrace& front, const AsymptoticPrediction& tmpl, double T1, double T2);

/// CSV with header t,m_pred,L_solver,deviation at the trace samples in [T1, T2].
void write_prediction(const std::filesystem::path& path, const FrontTrace& front,
                      const AsymptoticPrediction& pred, double T1, double T2);

}  // namespace fbp::asym
