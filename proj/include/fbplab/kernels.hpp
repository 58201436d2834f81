#pragma once

// Brownian path kernels shared by the Feynman-Kac and killed-diffusion
// validators. Paths are processed in fixed-size batches; batch b draws from
// mt19937_64 seeded with seed_seq{seed, b}, and per-batch partial results are
// reduced in batch order. Serial and OpenMP execution therefore give
// bit-identical results for any thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fbplab/grid.hpp"
#include "fbplab/initial_condition.hpp"

namespace fbp::mc {

enum class Exec { Serial, Parallel };

inline constexpr std::size_t kBatchSize = 1000;

/// Front values L(k dt), k = 0..n, by linear interpolation of the trace.
std::vector<double> front_on_steps(const FrontTrace& front, double dt, std::size_t n);

struct KilledRun {
    std::vector<double> times;       // checkpoint times (rounded to the step grid)
    std::vector<std::size_t> alive;  // survivors at each checkpoint
    std::size_t n_paths = 0;
    double dt = 0.0;
    /// Positions of the survivors at the last checkpoint, in batch order.
    std::vector<double> final_positions;
};

/// Brownian motions started from u0 = -dU0 and killed the first time they
/// are at or below the front (monitored every dt). With `bridge`, a path that
/// stays above at both ends of a step is also killed with the Brownian-bridge
/// crossing probability exp(-2 d1 d2 / dt) for the linearised barrier.
KilledRun killed_paths(const InitialCondition& ic, const FrontTrace& front, std::span<const double> checkpoints,
                       std::size_t n_paths, double dt, bool bridge, std::uint64_t seed, Exec exec);

struct FKRun {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    double dt = 0.0;
};

/// Monte Carlo estimate of E_x[U0(B_t) exp(Leb{s <= t : B_s >= L_{t-s}})].
/// Occupation time is accumulated with the trapezoid rule on the step grid.
FKRun feynman_kac_paths(const InitialCondition& ic, const FrontTrace& front, double t, double x,
                        std::size_t n_paths, double dt, std::uint64_t seed, Exec exec);

}  // namespace fbp::mc
