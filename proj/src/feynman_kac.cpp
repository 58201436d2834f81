#include "fbplab/feynman_kac.hpp"

#include "fbplab/errors.hpp"

namespace fbp {

MCEstimate feynman_kac_check(const InitialCondition& ic, const FrontTrace& front, double t, double x,
                             std::size_t n_paths, double dt_mc, std::uint64_t seed, mc::Exec exec) {
    if (n_paths < 100) throw ParameterError("feynman_kac_check needs at least 100 paths");
    if (t < 0.0) throw ParameterError("time must be non-negative");
    if (t == 0.0) return {eval(ic, x), 0.0, n_paths};
    const auto r = mc::feynman_kac_paths(ic, front, t, x, n_paths, dt_mc, seed, exec);
    return {r.mean, r.std_error, r.n_paths};
}

}  // namespace fbp
