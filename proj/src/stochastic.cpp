#include "fbplab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "json.hpp"
#include "fbplab/csv.hpp"
#include "fbplab/errors.hpp"

namespace fbp::stoch {
namespace {

std::mt19937_64 make_rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return std::mt19937_64(seq);
}

// Event-driven N-BBM state.
class Nbbm {
public:
    Nbbm(const InitialCondition& ic, std::size_t N, std::uint64_t seed) : rng_(make_rng(seed)), seed_(seed) {
        if (N < 2) throw ParameterError("N-BBM needs N >= 2");
        x_.resize(N);
        for (auto& v : x_) v = sample(ic, rng_);
        next_event_ = t_ + draw_wait();
    }

    /// Advances to time T, processing every branching event before it.
    void advance_to(double T) {
        while (next_event_ <= T) {
            diffuse(next_event_ - t_);
            t_ = next_event_;
            branch();
            next_event_ = t_ + draw_wait();
        }
        diffuse(T - t_);
        t_ = T;
    }

    Ensemble snapshot() const { return {x_, t_, events_, seed_}; }
    const std::vector<double>& positions() const { return x_; }

private:
    double draw_wait() {
        std::exponential_distribution<double> wait(static_cast<double>(x_.size()));
        return wait(rng_);
    }

    void diffuse(double dt) {
        if (dt <= 0.0) return;
        const double s = std::sqrt(dt);
        for (auto& v : x_) v += s * gauss_(rng_);
    }

    void branch() {
        std::uniform_int_distribution<std::size_t> pick(0, x_.size() - 1);
        const std::size_t parent = pick(rng_);
        // duplicate, then delete the minimum among the N + 1 particles
        const double child = x_[parent];
        *std::min_element(x_.begin(), x_.end()) = child;
        ++events_;
    }

    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    std::vector<double> x_;
    double t_ = 0.0;
    double next_event_ = 0.0;
    std::size_t events_ = 0;
    std::uint64_t seed_;
};

}  // namespace

std::vector<Ensemble> nbbm_run(const InitialCondition& ic, std::size_t N, std::span<const double> snapshot_times,
                               std::uint64_t seed) {
    std::vector<double> times(snapshot_times.begin(), snapshot_times.end());
    std::sort(times.begin(), times.end());
    if (!times.empty() && times.front() < 0.0) throw ParameterError("snapshot times must be non-negative");
    Nbbm sys(ic, N, seed);
    std::vector<Ensemble> out;
    for (double t : times) {
        sys.advance_to(t);
        out.push_back(sys.snapshot());
    }
    return out;
}

std::vector<std::vector<Ensemble>> nbbm_replicas(const InitialCondition& ic, std::size_t N,
                                                 std::span<const double> snapshot_times,
                                                 std::span<const std::uint64_t> seeds, mc::Exec exec) {
    std::vector<std::vector<Ensemble>> out(seeds.size());
    const auto n = static_cast<long long>(seeds.size());
    if (exec == mc::Exec::Serial) {
        for (long long k = 0; k < n; ++k) out[k] = nbbm_run(ic, N, snapshot_times, seeds[k]);
    } else {
#pragma omp parallel for schedule(dynamic)
        for (long long k = 0; k < n; ++k) out[k] = nbbm_run(ic, N, snapshot_times, seeds[k]);
    }
    return out;
}

std::vector<double> empirical_ccdf(std::span<const double> positions, std::span<const double> xs) {
    std::vector<double> sorted(positions.begin(), positions.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    std::vector<double> F;
    F.reserve(xs.size());
    for (double x : xs) {
        const auto below = std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
        F.push_back((n - static_cast<double>(below)) / n);
    }
    return F;
}

double ks_distance(std::span<const double> positions, const std::function<double(double)>& F) {
    std::vector<double> sorted(positions.begin(), positions.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const double f = F(sorted[k]);
        // empirical CCDF is (n-k)/n at the atom and (n-k-1)/n just right of it
        worst = std::max({worst, std::abs((n - static_cast<double>(k)) / n - f),
                          std::abs((n - static_cast<double>(k) - 1.0) / n - f)});
    }
    return worst;
}

StationaryCcdf nbbm_stationary_ccdf(std::size_t N, double burn_in, std::size_t n_samples, double thin,
                                    std::uint64_t seed, std::span<const double> xs, const InitialCondition& ic) {
    if (burn_in < 5.0) throw ParameterError("burn-in must be at least 5 time units");
    if (!(thin > 0.0) || n_samples == 0) throw ParameterError("need n_samples > 0 and thin > 0");
    Nbbm sys(ic, N, seed);
    StationaryCcdf out;
    out.xs.assign(xs.begin(), xs.end());
    out.ccdf.assign(xs.size(), 0.0);
    std::vector<double> centred(N);
    for (std::size_t s = 0; s < n_samples; ++s) {
        sys.advance_to(burn_in + static_cast<double>(s) * thin);
        const auto& x = sys.positions();
        const double lo = *std::min_element(x.begin(), x.end());
        for (std::size_t i = 0; i < N; ++i) centred[i] = x[i] - lo;
        const auto F = empirical_ccdf(centred, xs);
        for (std::size_t k = 0; k < F.size(); ++k) out.ccdf[k] += F[k];
    }
    for (auto& v : out.ccdf) v /= static_cast<double>(n_samples);
    out.samples = n_samples;
    return out;
}

SurvivalCurve killed_bm_survival(const InitialCondition& ic, const FrontTrace& front,
                                 std::span<const double> times, std::size_t n_paths, double dt_mc,
                                 std::uint64_t seed, bool bridge, mc::Exec exec) {
    if (n_paths == 0) throw ParameterError("need at least one path");
    const auto run = mc::killed_paths(ic, front, times, n_paths, dt_mc, bridge, seed, exec);
    SurvivalCurve s;
    s.times = run.times;
    s.n_paths = n_paths;
    s.dt_mc = run.dt;
    s.bridge = bridge;
    s.seed = seed;
    const auto n = static_cast<double>(n_paths);
    for (std::size_t alive : run.alive) {
        const double p = static_cast<double>(alive) / n;
        s.S.push_back(p);
        s.std_error.push_back(std::sqrt(p * (1.0 - p) / n));
    }
    return s;
}

CcdfSamples killed_bm_conditional_ccdf(const InitialCondition& ic, const FrontTrace& front, double t,
                                       std::size_t n_paths, double dt_mc, std::uint64_t seed,
                                       std::span<const double> xs, bool bridge, mc::Exec exec) {
    const double times[] = {t};
    const auto run = mc::killed_paths(ic, front, times, n_paths, dt_mc, bridge, seed, exec);
    CcdfSamples c;
    c.xs.assign(xs.begin(), xs.end());
    c.survivors = run.final_positions.size();
    c.n_paths = n_paths;
    if (c.survivors < 200) {
        throw PrecisionError("only " + std::to_string(c.survivors) +
                                 " survivors; increase n_paths (survivors ~ n_paths e^{-t})",
                             static_cast<double>(c.survivors));
    }
    std::vector<double> sorted = run.final_positions;
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    for (double x : xs) {
        const auto at_or_below = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
        const double F = (n - static_cast<double>(at_or_below)) / n;
        c.F.push_back(F);
        c.std_error.push_back(std::sqrt(F * (1.0 - F) / n));
    }
    return c;
}

void write_survival_csv(const std::filesystem::path& path, const SurvivalCurve& s) {
    io::write_csv(path, {"t", "S", "stderr"}, {s.times, s.S, s.std_error});
}

void write_ccdf_csv(const std::filesystem::path& path, const CcdfSamples& c) {
    io::write_csv(path, {"x", "F", "stderr"}, {c.xs, c.F, c.std_error});
}

void write_nbbm_ccdf_csv(const std::filesystem::path& path, const StationaryCcdf& c) {
    io::write_csv(path, {"x", "F"}, {c.xs, c.ccdf});
}

void write_sidecar(const std::filesystem::path& path, std::uint64_t seed, std::size_t n_paths, double dt_mc,
                   const std::string& kind) {
    nlohmann::json j{{"kind", kind}, {"seed", seed}, {"n_paths", n_paths}, {"dt_mc", dt_mc}};
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream(path) << j.dump(2) << '\n';
}

}  // namespace fbp::stoch
