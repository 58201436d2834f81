#pragma once

#include <cstdint>

#include "fbplab/grid.hpp"
#include "fbplab/initial_condition.hpp"
#include "fbplab/kernels.hpp"

namespace fbp {

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

/// Feynman-Kac estimate of U(t, x) for the boundary `front` (which must
/// cover [0, t]). At t = 0 the exact value U0(x) is returned with zero error.
MCEstimate feynman_kac_check(const InitialCondition& ic, const FrontTrace& front, double t, double x,
                             std::size_t n_paths, double dt_mc, std::uint64_t seed,
                             mc::Exec exec = mc::Exec::Parallel);

}  // namespace fbp
