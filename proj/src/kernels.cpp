#include "fbplab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fbplab/errors.hpp"

namespace fbp::mc {
namespace {

std::mt19937_64 batch_rng(std::uint64_t seed, std::size_t batch) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
    return std::mt19937_64(seq);
}

std::size_t batch_count(std::size_t n_paths) { return (n_paths + kBatchSize - 1) / kBatchSize; }

std::size_t batch_len(std::size_t b, std::size_t n_paths) {
    return std::min(kBatchSize, n_paths - b * kBatchSize);
}

// Runs body(b) for every batch, serially or with an OpenMP worksharing loop.
template <class Body>
void for_each_batch(std::size_t n_batches, Exec exec, Body&& body) {
    if (exec == Exec::Serial) {
        for (std::size_t b = 0; b < n_batches; ++b) body(b);
        return;
    }
    const auto n = static_cast<long long>(n_batches);
#pragma omp parallel for schedule(dynamic)
    for (long long b = 0; b < n; ++b) body(static_cast<std::size_t>(b));
}

}  // namespace

std::vector<double> front_on_steps(const FrontTrace& front, double dt, std::size_t n) {
    std::vector<double> L(n + 1);
    const double t_end = front.times.back();
    for (std::size_t k = 0; k <= n; ++k) L[k] = front.at(std::min(static_cast<double>(k) * dt, t_end));
    return L;
}

KilledRun killed_paths(const InitialCondition& ic, const FrontTrace& front, std::span<const double> checkpoints,
                       std::size_t n_paths, double dt, bool bridge, std::uint64_t seed, Exec exec) {
    if (!(dt > 0.0)) throw ParameterError("Monte Carlo step must be positive");
    if (checkpoints.empty()) throw ParameterError("no checkpoint times");
    const double T = *std::max_element(checkpoints.begin(), checkpoints.end());
    if (T < 0.0) throw ParameterError("checkpoint times must be non-negative");
    if (!front.covers(0.0) || !front.covers(T)) throw ParameterError("front trace shorter than the horizon");

    const auto n_steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    const double h = n_steps > 0 ? T / static_cast<double>(n_steps) : dt;
    const std::vector<double> L = front_on_steps(front, h, n_steps);

    KilledRun run;
    run.n_paths = n_paths;
    run.dt = h;
    std::vector<std::size_t> check_step;
    for (double c : checkpoints) {
        const auto k = static_cast<std::size_t>(std::llround(c / h));
        check_step.push_back(k);
        run.times.push_back(static_cast<double>(k) * h);
    }
    // mark[k] lists checkpoints at step k
    std::vector<std::vector<std::size_t>> at_step(n_steps + 1);
    for (std::size_t j = 0; j < check_step.size(); ++j) at_step[check_step[j]].push_back(j);

    const std::size_t n_batches = batch_count(n_paths);
    std::vector<std::vector<std::size_t>> alive(n_batches, std::vector<std::size_t>(checkpoints.size(), 0));
    std::vector<std::vector<double>> finals(n_batches);
    const double sqrt_h = std::sqrt(h);

    for_each_batch(n_batches, exec, [&](std::size_t b) {
        auto rng = batch_rng(seed, b);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        auto& count = alive[b];
        for (std::size_t p = 0, m = batch_len(b, n_paths); p < m; ++p) {
            double x = sample(ic, rng);
            bool dead = false;
            for (std::size_t j : at_step[0]) ++count[j];
            for (std::size_t k = 1; k <= n_steps; ++k) {
                const double x_new = x + sqrt_h * gauss(rng);
                const double d2 = x_new - L[k];
                if (d2 <= 0.0) {
                    dead = true;
                } else if (bridge) {
                    // a path sitting exactly on the barrier (atomic start) is
                    // left to the discrete check
                    const double d1 = x - L[k - 1];
                    const double expo = 2.0 * d1 * d2 / h;
                    if (d1 > 0.0 && expo < 50.0 && unif(rng) < std::exp(-expo)) dead = true;
                }
                if (dead) break;
                x = x_new;
                for (std::size_t j : at_step[k]) ++count[j];
            }
            if (!dead) finals[b].push_back(x);
        }
    });

    run.alive.assign(checkpoints.size(), 0);
    for (std::size_t b = 0; b < n_batches; ++b) {
        for (std::size_t j = 0; j < checkpoints.size(); ++j) run.alive[j] += alive[b][j];
        run.final_positions.insert(run.final_positions.end(), finals[b].begin(), finals[b].end());
    }
    return run;
}

FKRun feynman_kac_paths(const InitialCondition& ic, const FrontTrace& front, double t, double x,
                        std::size_t n_paths, double dt, std::uint64_t seed, Exec exec) {
    if (!(dt > 0.0)) throw ParameterError("Monte Carlo step must be positive");
    if (!front.covers(0.0) || !front.covers(t)) throw ParameterError("front trace does not cover [0, t]");
    const auto n_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t / dt - 1e-9)));
    const double h = t / static_cast<double>(n_steps);
    // boundary seen by the path at time s is L_{t-s}
    std::vector<double> L = front_on_steps(front, h, n_steps);
    std::reverse(L.begin(), L.end());

    const std::size_t n_batches = batch_count(n_paths);
    std::vector<double> sum(n_batches, 0.0), sum_sq(n_batches, 0.0);
    const double sqrt_h = std::sqrt(h);

    for_each_batch(n_batches, exec, [&](std::size_t b) {
        auto rng = batch_rng(seed, b);
        std::normal_distribution<double> gauss(0.0, 1.0);
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t p = 0, m = batch_len(b, n_paths); p < m; ++p) {
            double y = x;
            double above_prev = y >= L[0] ? 1.0 : 0.0;
            double occupation = 0.0;
            for (std::size_t k = 1; k <= n_steps; ++k) {
                y += sqrt_h * gauss(rng);
                const double above = y >= L[k] ? 1.0 : 0.0;
                occupation += 0.5 * (above_prev + above);
                above_prev = above;
            }
            const double w = eval(ic, y) * std::exp(occupation * h);
            s1 += w;
            s2 += w * w;
        }
        sum[b] = s1;
        sum_sq[b] = s2;
    });

    double s1 = 0.0, s2 = 0.0;
    for (std::size_t b = 0; b < n_batches; ++b) {
        s1 += sum[b];
        s2 += sum_sq[b];
    }
    const auto n = static_cast<double>(n_paths);
    FKRun r;
    r.n_paths = n_paths;
    r.dt = h;
    r.mean = s1 / n;
    const double var = std::max(0.0, s2 / n - r.mean * r.mean) * n / std::max(1.0, n - 1.0);
    r.std_error = std::sqrt(var / n);
    return r;
}

}  // namespace fbp::mc
