#pragma once

// Monte Carlo realisations of the probabilistic representations: the N-BBM
// particle system and Brownian motion killed at the free boundary.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "fbplab/grid.hpp"
#include "fbplab/initial_condition.hpp"
#include "fbplab/kernels.hpp"
#include "fbplab/waves.hpp"

namespace fbp::stoch {

struct Ensemble {
    std::vector<double> positions;
    double t = 0.0;
    std::size_t n_branch_events = 0;
    std::uint64_t seed = 0;
};

/// N-BBM from N i.i.d. samples of u0: branching at total rate N (exponential
/// waiting times), exact Gaussian moves of every particle between events; the
/// branching particle is duplicated and the current minimum (lowest index on
/// ties) removed. Returns one ensemble per snapshot time (ascending).
std::vector<Ensemble> nbbm_run(const InitialCondition& ic, std::size_t N, std::span<const double> snapshot_times,
                               std::uint64_t seed);

/// Independent replicas, one per seed, run concurrently with Exec::Parallel.
std::vector<std::vector<Ensemble>> nbbm_replicas(const InitialCondition& ic, std::size_t N,
                                                 std::span<const double> snapshot_times,
                                                 std::span<const std::uint64_t> seeds, mc::Exec exec);

/// Fraction of particles at or right of each x.
std::vector<double> empirical_ccdf(std::span<const double> positions, std::span<const double> xs);

/// sup_x |#{X_i >= x}/n - F(x)| for continuous F, evaluated on both sides of
/// every jump of the empirical CCDF.
double ks_distance(std::span<const double> positions, const std::function<double(double)>& F);

struct StationaryCcdf {
    std::vector<double> xs;
    std::vector<double> ccdf;
    std::size_t samples = 0;
};

/// Runs N-BBM for burn_in, then records n_samples ensembles every `thin`
/// time units, each centred by its minimum, and averages their CCDFs on xs.
StationaryCcdf nbbm_stationary_ccdf(std::size_t N, double burn_in, std::size_t n_samples, double thin,
                                    std::uint64_t seed, std::span<const double> xs,
                                    const InitialCondition& ic = Wave{waves::kSqrt2});

struct SurvivalCurve {
    std::vector<double> times;
    std::vector<double> S;
    std::vector<double> std_error;
    std::size_t n_paths = 0;
    double dt_mc = 0.0;
    bool bridge = true;
    std::uint64_t seed = 0;
};

/// P(tau > t) for Brownian motion started from u0 and killed at the front.
SurvivalCurve killed_bm_survival(const InitialCondition& ic, const FrontTrace& front,
                                 std::span<const double> times, std::size_t n_paths, double dt_mc,
                                 std::uint64_t seed, bool bridge = true, mc::Exec exec = mc::Exec::Parallel);

struct CcdfSamples {
    std::vector<double> xs;
    std::vector<double> F;
    std::vector<double> std_error;
    std::size_t survivors = 0;
    std::size_t n_paths = 0;
};

/// P(B_t > x | tau > t) at each x. Throws PrecisionError (achieved = number
/// of survivors) when fewer than 200 paths survive.
CcdfSamples killed_bm_conditional_ccdf(const InitialCondition& ic, const FrontTrace& front, double t,
                                       std::size_t n_paths, double dt_mc, std::uint64_t seed,
                                       std::span<const double> xs, bool bridge = true,
                                       mc::Exec exec = mc::Exec::Parallel);

void write_survival_csv(const std::filesystem::path& path, const SurvivalCurve& s);
void write_ccdf_csv(const std::filesystem::path& path, const CcdfSamples& c);
void write_nbbm_ccdf_csv(const std::filesystem::path& path, const StationaryCcdf& c);

/// {seed, n_paths, dt_mc, ...} run metadata next to the CSV outputs.
void write_sidecar(const std::filesystem::path& path, std::uint64_t seed, std::size_t n_paths, double dt_mc,
                   const std::string& kind);

}  // namespace fbp::stoch
