#include "fbplab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "fbplab/asymptotics.hpp"
#include "fbplab/beta_problem.hpp"
#include "fbplab/brunet_derrida.hpp"
#include "fbplab/csv.hpp"
#include "fbplab/quadrature.hpp"
#include "fbplab/solver.hpp"
#include "fbplab/stochastic.hpp"
#include "fbplab/waves.hpp"

namespace fbp::acceptance {
namespace {

constexpr double kSqrt2 = waves::kSqrt2;
constexpr double kInf = std::numeric_limits<double>::infinity();
using Path = std::optional<std::filesystem::path>;

Check at_most(std::string name, double measured, double tol) {
    return {std::move(name), measured, tol, measured <= tol};
}

solver::SolveOptions options(double T, double dt_out = 0.01) {
    solver::SolveOptions o;
    o.T = T;
    o.dt_out = dt_out;
    return o;
}

void save_front(const Path& dir, const std::string& name, const FrontTrace& f) {
    if (dir) io::write_csv(*dir / name, {"t", "L"}, {f.times, f.positions});
}

CriterionResult c01_wave_fixed_point(const Path& dir) {
    CriterionResult r{1, "travelling-wave-fixed-point", "minimal-wave-exact-solution", {}, 0.0, ""};
    auto o = options(20.0);
    for (int k = 0; k <= 20; ++k) o.snapshot_times.push_back(k);
    const auto res = solver::solve_obstacle(Wave{kSqrt2}, Grid::centred(0.02, 60.0), o);
    double prof = 0.0, front = 0.0;
    for (const auto& p : res.snapshots) {
        const double L = solver::extract_front(p);
        prof = std::max(prof, solver::max_deviation_from(
                                  p, L, [](double y) { return waves::Pi_c(kSqrt2, y); }, -kInf, kInf));
        front = std::max(front, std::abs(L - kSqrt2 * p.t));
    }
    r.checks.push_back(at_most("max|U(t,L_t+x)-Pi_min(x)|", prof, 5e-3));
    r.checks.push_back(at_most("max|L_t-sqrt2 t|", front, 0.05));
    save_front(dir, "c01_front.csv", res.front);
    return r;
}

CriterionResult c02_bramson(const Path& dir) {
    CriterionResult r{2, "bramson-log-correction", "finite-mass-front-position", {}, 0.0, ""};
    const auto res = solver::solve_obstacle(Heaviside{}, Grid::centred(0.02, 120.0, 0.15), options(200.0, 0.1));
    const auto tmpl = asym::pulled_prediction(Heaviside{}, asym::MassCase::Finite);
    const auto all = asym::fit_front(res.front, tmpl, 50.0, 200.0);
    const auto early = asym::fit_front(res.front, tmpl, 50.0, 100.0);
    const auto late = asym::fit_front(res.front, tmpl, 100.0, 200.0);
    r.checks.push_back(at_most("spread of L_t-[sqrt2 t-3/(2sqrt2) log t] on [50,200]", all.spread, 0.08));
    r.checks.push_back(at_most("|c[50,100]-c[100,200]|", std::abs(early.constant - late.constant), 0.05));
    char buf[160];
    std::snprintf(buf, sizeof buf, "fitted constants %.4f (50-100), %.4f (100-200)", early.constant,
                  late.constant);
    r.note = std::string(buf) + "; residual still carries a ~1/sqrt(t) correction";
    save_front(dir, "c02_front.csv", res.front);
    if (dir) asym::write_prediction(*dir / "c02_prediction.csv", res.front, tmpl, 50.0, 200.0);
    return r;
}

CriterionResult c03_brunet_derrida(const Path& dir) {
    CriterionResult r{3, "brunet-derrida-identity", "brunet-derrida-relation", {}, 0.0, ""};
    const InitialCondition ic = PowerExpTail{1.0, 0.0, 1.0};
    const auto res = solver::solve_obstacle(ic, Grid::centred(0.02, 60.0), options(60.0));
    std::vector<bd::BDReport> rows;
    for (double rr : {-1.0, 0.5}) {
        const auto rep = bd::bd_check(ic, res.front, rr);
        rows.push_back(rep);
        const std::string tag = rr < 0 ? "r=-1" : "r=0.5";
        r.checks.push_back(at_most("rel_err " + tag, rep.rel_err, bd::kRelTol));
        r.checks.push_back(at_most("tail_fraction " + tag, rep.tail_fraction, bd::kMaxTailFraction));
    }
    const double exact = (2.0 * kSqrt2 - 1.0) / ((1.0 - kSqrt2) * (1.0 - kSqrt2));
    const double lhs = bd::bd_lhs(Wave{kSqrt2}, 1.0);
    const auto rhs = bd::bd_rhs(linear_front(0.0, kSqrt2, 60.0, 0.01), 0.0, 1.0, kSqrt2);
    r.checks.push_back(at_most("|lhs(wave,r=1)-exact|", std::abs(lhs - exact), 1e-8));
    r.checks.push_back(at_most("|rhs(sqrt2 t,r=1)-exact|", std::abs(rhs.value - exact), 1e-8));
    if (dir) bd::write_report(*dir / "c03_bd_report.csv", rows);
    return r;
}

CriterionResult c04_speed_law(const Path&) {
    CriterionResult r{4, "r0-speed-law", "limsup-speed-from-r0", {}, 0.0, ""};
    const double T = 50.0;
    const InitialCondition slow = PowerExpTail{1.0, 0.0, 1.0};
    const double v_pred = bd::speed_from_r0(bd::r0_of(slow));
    const auto a = solver::solve_obstacle(slow, Grid::centred(0.02, 60.0), options(T, 0.1));
    const double va = a.front.positions.back() / T;
    r.checks.push_back(at_most("|L_T/T-1.5|/1.5 (powexp:1,0,1)", std::abs(va - v_pred) / v_pred, 0.05));
    const auto h = solver::solve_obstacle(Heaviside{}, Grid::centred(0.02, 60.0), options(T, 0.1));
    const double vh = (h.front.positions.back() - asym::kBramsonLogCoeff * std::log(T)) / T;
    r.checks.push_back(at_most("|(L_T+3/(2sqrt2) log T)/T-sqrt2|/sqrt2 (heaviside)",
                               std::abs(vh - kSqrt2) / kSqrt2, 0.05));
    return r;
}

CriterionResult c05_slow_decay(const Path&) {
    CriterionResult r{5, "slower-decay-constant", "slow-decay-centring", {}, 0.0, ""};
    const InitialCondition ic = PowerExpTail{1.0, 0.0, 1.0};
    const double T = 50.0;
    const auto res = solver::solve_obstacle(ic, Grid::centred(0.02, 60.0), options(T, 0.1));
    const double gap = res.front.positions.back() - asym::m_slow_decay(ic, T);
    const double target = asym::slow_decay_offset(1.5);
    r.checks.push_back(at_most("|L_T-m(T)-log 0.5|", std::abs(gap - target), 0.05));
    char buf[96];
    std::snprintf(buf, sizeof buf, "L_T - m(T) = %.5f, limit %.5f", gap, target);
    r.note = buf;
    return r;
}

CriterionResult c06_killed_survival(const Path& dir) {
    CriterionResult r{6, "killed-bm-survival", "killed-diffusion-survival-law", {}, 0.0, ""};
    const std::vector<double> times = {1, 2, 3, 4, 5};
    const auto front = linear_front(0.0, kSqrt2, 5.0, 0.01);
    const auto s = stoch::killed_bm_survival(Wave{kSqrt2}, front, times, 100000, 1e-3, 2024);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double z = std::abs(s.S[k] - std::exp(-s.times[k])) / s.std_error[k];
        r.checks.push_back(at_most("|S-e^{-t}|/stderr t=" + std::to_string(k + 1), z, 3.0));
    }
    if (dir) stoch::write_survival_csv(*dir / "c06_survival.csv", s);
    return r;
}

CriterionResult c07_hydrodynamic(const Path&) {
    CriterionResult r{7, "nbbm-hydrodynamic-limit", "nbbm-empirical-measure-limit", {}, 0.0, ""};
    const auto sol = solver::solve_obstacle(Wave{kSqrt2}, Grid::centred(0.02, 60.0), options(2.0));
    const auto& U = sol.final_profile;
    const std::vector<std::uint64_t> seeds = {11, 12, 13};
    const double times[] = {2.0};
    const auto runs = stoch::nbbm_replicas(Wave{kSqrt2}, 10000, times, seeds, mc::Exec::Parallel);
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        const double d = stoch::ks_distance(runs[k][0].positions, [&](double x) { return U.at(x); });
        r.checks.push_back(at_most("sup|F_N-U(2,.)| seed " + std::to_string(seeds[k]), d, 0.03));
    }
    r.note = "dominated by the random shift of the N-BBM front, not sampling noise (iid floor ~0.9/sqrt N = 0.009)";
    return r;
}

CriterionResult c08_selection(const Path& dir) {
    CriterionResult r{8, "selection-principle-finite-N", "nbbm-selects-minimal-wave", {}, 0.0, ""};
    std::vector<double> xs;
    for (int k = 0; k <= 2000; ++k) xs.push_back(0.01 * k);
    const auto c = stoch::nbbm_stationary_ccdf(1000, 20.0, 200, 0.5, 7, xs);
    double worst = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) worst = std::max(worst, std::abs(c.ccdf[k] - waves::Pi_c(kSqrt2, xs[k])));
    r.checks.push_back(at_most("sup|avg centred CCDF-Pi_min|", worst, 0.1));
    if (dir) stoch::write_nbbm_ccdf_csv(*dir / "c08_nbbm_ccdf.csv", c);
    return r;
}

CriterionResult c09_beta_pushed(const Path& dir) {
    CriterionResult r{9, "beta-pushed-regime", "pushed-minimal-speed", {}, 0.0, ""};
    const double beta = 2.0, T = 30.0;
    const auto res = beta::solve_beta({beta, BetaWave{beta}}, Grid::centred(0.02, 60.0), options(T));
    const double L = res.front.positions.back();
    r.checks.push_back(at_most("|L_T/T-1.5|", std::abs(L / T - 1.5), 0.02));
    const auto slope = solver::boundary_slope_diagnostics(res.V_final, L);
    r.checks.push_back(at_most("|dV/dx(L_T+)+beta|", std::abs(slope.first + beta), 0.05));

    const Grid g = Grid::centred(0.01, 60.0);
    const auto U = sample_profile(Wave{kSqrt2}, g);
    const auto back = beta::map_V_to_U(beta::map_U_to_V(U, beta, 0.0), beta, 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < U.values.size(); ++i) worst = std::max(worst, std::abs(back.values[i] - U.values[i]));
    r.checks.push_back(at_most("round trip max-norm (dx=0.01)", worst, 1e-6));
    save_front(dir, "c09_front.csv", res.front);
    return r;
}

CriterionResult c10_moments(const Path&) {
    CriterionResult r{10, "beta-moment-identities", "U0-V0-exponential-moments", {}, 0.0, ""};
    const InitialCondition V0 = PowerExpTail{1.0, -1.0, 2.5};
    for (double beta : {1.0, kSqrt2, 2.0}) {
        const double b = 2.0 / beta;
        for (double rr : {-1.0, 0.5}) {
            auto u0 = [&](double x) { return beta::map_V0_to_U0_at(V0, beta, x); };
            // u0 decays like e^{-min(b, 2.5) x}; beyond X the integrand is below e^{-60}
            const double X = 60.0 / (std::min(b, 2.5) - rr);
            // split at the kinks of V0 (u0'' jumps there) and keep the tolerance
            // above the ~1e-12 noise of the pointwise map
            const auto bps = breakpoints(V0);
            const double lhs =
                quad::integrate_split([&](double x) { return std::exp(rr * x) * u0(x); }, 0.0, X, bps, 1e-9).value;
            const double right =
                quad::integrate_split([&](double x) { return std::exp(rr * x + log_eval(V0, x)); }, 0.0, kInf, bps).value;
            const double left = quad::integrate([&](double x) { return std::exp(b * x + log_eval(V0, x)); }, -kInf, 0.0).value;
            const double rhs = 2.0 / (2.0 - rr * beta) * (right + left);
            char name[64];
            std::snprintf(name, sizeof name, "rel gap r=%g beta=%.4g", rr, beta);
            r.checks.push_back(at_most(name, std::abs(lhs - rhs) / std::abs(rhs), 1e-6));
        }
    }
    return r;
}

CriterionResult c11_infinite_mass(const Path&) {
    CriterionResult r{11, "infinite-mass-b-asymptotics", "heavy-tail-loglog-correction", {}, 0.0, ""};
    const double A = 1.0, t = 1e4;
    const double b = asym::b_of_t(PowerExpTail{A, -2.0, kSqrt2}, t);
    const double pred = std::log(A / 2.0 * std::log(t)) / kSqrt2;
    r.checks.push_back(at_most("|b(1e4)-(1/sqrt2)log((A/2)log t)|", std::abs(b - pred), 0.02));
    r.note = "the gap decays only like 1/log t (O(1) lower-limit terms inside the log)";
    return r;
}

CriterionResult c12_penalization(const Path&) {
    CriterionResult r{12, "penalization-convergence", "penalized-approximation-monotone", {}, 0.0, ""};
    const std::vector<int> ns = {8, 16, 32, 64, 128};
    std::vector<Profile> U(ns.size());
    auto o = options(5.0);
    o.recenter = false;
    const Grid g = Grid::centred(0.02, 60.0);
    const auto count = static_cast<long long>(ns.size());
#pragma omp parallel for schedule(dynamic)
    for (long long k = 0; k < count; ++k) {
        U[static_cast<std::size_t>(k)] = solver::solve_penalized(Heaviside{}, g, ns[static_cast<std::size_t>(k)], o).final_profile;
    }
    double violation = 0.0;
    std::vector<double> gaps;
    for (std::size_t a = 0; a < ns.size(); ++a) {
        for (std::size_t b = a + 1; b < ns.size(); ++b) {
            for (std::size_t i = 0; i < U[a].values.size(); ++i)
                violation = std::max(violation, U[a].values[i] - U[b].values[i]);
        }
        if (a + 1 < ns.size()) {
            double gap = 0.0;
            for (std::size_t i = 0; i < U[a].values.size(); ++i)
                gap = std::max(gap, std::abs(U[a + 1].values[i] - U[a].values[i]));
            gaps.push_back(gap);
        }
    }
    r.checks.push_back(at_most("max(U_n1-U_n2), n1<n2", violation, 1e-9));
    double worst_ratio = 0.0;
    for (std::size_t k = 1; k < gaps.size(); ++k) worst_ratio = std::max(worst_ratio, gaps[k] / gaps[k - 1]);
    // strictly decreasing gaps: every ratio below 1
    r.checks.push_back({"max gap ratio (must be < 1)", worst_ratio, 1.0, worst_ratio < 1.0});
    char buf[160];
    std::snprintf(buf, sizeof buf, "Cauchy gaps %.3g %.3g %.3g %.3g", gaps[0], gaps[1], gaps[2], gaps[3]);
    r.note = buf;
    return r;
}

}  // namespace

bool CriterionResult::pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string CriterionResult::summary() const {
    char head[96];
    std::snprintf(head, sizeof head, "[%s] C%02d %-32s", pass() ? "PASS" : "FAIL", id, name.c_str());
    std::string s = head;
    for (std::size_t k = 0; k < checks.size(); ++k) {
        const auto& c = checks[k];
        char part[200];
        std::snprintf(part, sizeof part, "%s%s=%.3g%s%.3g", k ? "; " : " ", c.name.c_str(), c.measured,
                      c.pass ? "<=" : ">", c.tolerance);
        s += part;
    }
    char tail[32];
    std::snprintf(tail, sizeof tail, " (%.1f s)", seconds);
    s += tail;
    return s;
}

CriterionResult run_criterion(int id, const Path& out_dir) {
    using Fn = CriterionResult (*)(const Path&);
    static constexpr Fn table[kCriteria] = {c01_wave_fixed_point, c02_bramson,         c03_brunet_derrida,
                                            c04_speed_law,        c05_slow_decay,      c06_killed_survival,
                                            c07_hydrodynamic,     c08_selection,       c09_beta_pushed,
                                            c10_moments,          c11_infinite_mass,   c12_penalization};
    if (id < 1 || id > kCriteria) throw std::out_of_range("acceptance criterion id must be 1..12");
    if (out_dir) std::filesystem::create_directories(*out_dir);
    const auto start = std::chrono::steady_clock::now();
    auto r = table[id - 1](out_dir);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CriterionResult> run_all(const Path& out_dir, const std::function<void(const CriterionResult&)>& on_done) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriteria; ++id) {
        out.push_back(run_criterion(id, out_dir));
        if (on_done) on_done(out.back());
    }
    return out;
}

}  // namespace fbp::acceptance
