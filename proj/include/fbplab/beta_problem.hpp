#pragma once

// The beta-generalised free boundary problem
//
//   dV/dt = (1/2) V_xx + V on x > L_t,  V = 1 on x <= L_t,  dV/dx(L_t+) = -beta,
//
// handled through the exact correspondence with the base problem:
//   U0(x) = (2/beta) e^{-2x/beta} int_{-inf}^x e^{2z/beta} V0(z) dz,
//   V = U + (beta/2) dU/dx.
// V is never time-stepped; it is always derived from the obstacle solution U.

#include <filesystem>
#include <optional>
#include <vector>

#include "fbplab/asymptotics.hpp"
#include "fbplab/grid.hpp"
#include "fbplab/initial_condition.hpp"
#include "fbplab/solver.hpp"

namespace fbp::beta {

struct BetaConfig {
    double beta = 1.0;
    InitialCondition V0 = Heaviside{};
};

/// Throws ParameterError unless beta > 0 (and V0 validates).
void validate(const BetaConfig& cfg);

/// U0 from V0. Closed forms for Heaviside (-> powexp:1,0,2/beta), unit
/// exponential tails (-> tworate) and matching beta-waves (-> wave); a
/// quadrature-built table otherwise.
InitialCondition map_V0_to_U0(const InitialCondition& V0, double beta);

/// U0(x) from V0 by direct adaptive quadrature at a single point; an
/// independent route to the same map, used for cross-checks.
double map_V0_to_U0_at(const InitialCondition& V0, double beta, double x);

/// V = U + (beta/2) U_x right of the front (fourth-order differences that
/// never straddle the front), V = 1 on x <= front.
Profile map_U_to_V(const Profile& U, double beta, double front);

/// Inverse map. V is taken to be 1 left of the window and on x <= front;
/// when the front is not given it is taken as the last sample with V >= 1.
Profile map_V_to_U(const Profile& V, double beta, std::optional<double> front = std::nullopt);

struct BetaSolveResult {
    std::vector<Profile> V_snapshots;
    std::vector<Profile> U_snapshots;
    FrontTrace front;
    Profile V_final;
    Profile U_final;
    double I_beta = 0.0;  // +inf when divergent
};

BetaSolveResult solve_beta(const BetaConfig& cfg, const Grid& grid, const solver::SolveOptions& opt);

/// int_0^inf x e^{sqrt2 x} V0 (beta < sqrt 2) or int_R e^{2x/beta} V0
/// (beta >= sqrt 2); +inf when divergent.
double I_beta(const InitialCondition& V0, double beta);

/// Three-regime front prediction. Pulled uses b(t) of the mapped U0 at
/// `times`; divergent I_beta yields a note and no constant. Throws
/// RegimeError when V0 decays slower than e^{-min(sqrt2, 2/beta) x}.
asym::AsymptoticPrediction front_prediction_beta(const BetaConfig& cfg, const std::vector<double>& times = {});

/// Pushed regime (beta > sqrt 2): m(t) of the mapped U0 plus the limiting
/// offset (beta/2)(log(beta^2 - 2) - 2 log beta).
double m_pushed(const BetaConfig& cfg, double t);

/// Regime report {beta, regime, c_min, I_beta, predicted_constant} as JSON.
void write_regime_report(const std::filesystem::path& path, const BetaConfig& cfg);

}  // namespace fbp::beta
