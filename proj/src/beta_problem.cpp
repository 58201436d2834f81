#include "fbplab/beta_problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "json.hpp"
#include "fbplab/errors.hpp"
#include "fbplab/quadrature.hpp"
#include "fbplab/waves.hpp"

namespace fbp::beta {
namespace {

constexpr double kSqrt2 = waves::kSqrt2;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -kInf;

// 4-point Gauss-Legendre on [0, 1]
constexpr std::array<double, 4> kGLNodes = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281,
                                            0.9305681557970263};
constexpr std::array<double, 4> kGLWeights = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731,
                                              0.1739274225687269};

bool is_pushmi(double beta) { return std::abs(beta - kSqrt2) <= 1e-12; }

void require_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be a positive number");
}

// Cubic through (z[m], f[m]) evaluated at s.
double lagrange4(const double* z, const double* f, double s) {
    double sum = 0.0;
    for (int m = 0; m < 4; ++m) {
        double w = 1.0;
        for (int q = 0; q < 4; ++q) {
            if (q != m) w *= (s - z[q]) / (z[m] - z[q]);
        }
        sum += w * f[m];
    }
    return sum;
}

// int_a^c e^{-k (c - z)} p(z) dz with p the cubic through the given nodes.
double weighted_cell(double a, double c, double k, const double* z, const double* f) {
    const double h = c - a;
    double sum = 0.0;
    for (std::size_t q = 0; q < 4; ++q) {
        const double s = a + kGLNodes[q] * h;
        sum += kGLWeights[q] * std::exp(-k * (c - s)) * lagrange4(z, f, s);
    }
    return sum * h;
}

// int_lo^inf exp(log_w(x) + log V0(x)) dx split into a head and a tail scaled
// by 1/k, where k is the net exponential decay of the integrand.
template <class LogWeight>
double tail_weighted_integral(const InitialCondition& V0, LogWeight log_w, double lo, double k) {
    auto f = [&](double x) {
        const double lv = log_eval(V0, x);
        if (lv == kNegInf) return 0.0;
        return std::exp(log_w(x) + lv);
    };
    const auto bps = breakpoints(V0);
    if (const auto* t = std::get_if<Tabulated>(&V0)) {
        return t->xs.back() > lo ? quad::integrate_split(f, lo, t->xs.back(), bps).value : 0.0;
    }
    const double X = std::max(lo, *std::max_element(bps.begin(), bps.end())) + 1.0;
    if (!std::isfinite(k) || k <= 0.0) k = 1.0;
    const double head = quad::integrate_split(f, lo, X, bps).value;
    const double tail = quad::integrate([&](double s) { return f(X + s / k); }, 0.0, kInf).value / k;
    return head + tail;
}

InitialCondition tabulate_U0(const InitialCondition& V0, double beta) {
    const double b = 2.0 / beta;
    const double L0 = left_edge(V0);
    const double h = 1e-3;
    const double far = right_extent(V0, 1e-14);
    Tabulated t;
    t.xs.push_back(L0);
    t.us.push_back(1.0);
    double u = 1.0;
    const double decay = std::exp(-b * h);
    for (std::size_t i = 1; i < 4'000'000; ++i) {
        const double x0 = L0 + static_cast<double>(i - 1) * h;
        const double x1 = x0 + h;
        double inc = 0.0;
        for (std::size_t q = 0; q < 4; ++q) {
            const double s = x0 + kGLNodes[q] * h;
            inc += kGLWeights[q] * std::exp(-b * (x1 - s)) * eval(V0, s);
        }
        u = std::min(u, decay * u + b * h * inc);
        t.xs.push_back(x1);
        t.us.push_back(u);
        if (u < 1e-13 && x1 > far) break;
    }
    return t;
}

}  // namespace

void validate(const BetaConfig& cfg) {
    require_beta(cfg.beta);
    fbp::validate(cfg.V0);
}

InitialCondition map_V0_to_U0(const InitialCondition& V0, double beta) {
    require_beta(beta);
    fbp::validate(V0);
    const double b = 2.0 / beta;
    if (std::holds_alternative<Heaviside>(V0)) return PowerExpTail{1.0, 0.0, b};
    if (const auto* p = std::get_if<PowerExpTail>(&V0); p && p->nu == 0.0 && p->A == 1.0) {
        return TwoRate{p->lam, b};
    }
    if (const auto* w = std::get_if<BetaWave>(&V0); w && w->beta == beta) {
        return Wave{waves::c_beta_min(beta)};
    }
    return tabulate_U0(V0, beta);
}

double map_V0_to_U0_at(const InitialCondition& V0, double beta, double x) {
    require_beta(beta);
    const double b = 2.0 / beta;
    const double L0 = left_edge(V0);
    if (x <= L0) return 1.0;
    // e^{-b x} [ e^{b L0}/b + int_{L0}^x e^{b z} V0(z) dz ] * b, kept scaled by e^{-b x}
    auto f = [&](double z) { return std::exp(-b * (x - z)) * eval(V0, z); };
    const auto bps = breakpoints(V0);
    return std::exp(-b * (x - L0)) + b * quad::integrate_split(f, L0, x, bps, 1e-12).value;
}

Profile map_U_to_V(const Profile& U, double beta, double front) {
    if (!(beta >= 0.0)) throw ParameterError("beta must be non-negative");
    Profile V = U;
    const auto& u = U.values;
    const auto n = static_cast<std::ptrdiff_t>(u.size());
    const double h = U.grid.dx;
    // last index on or left of the front
    auto j = static_cast<std::ptrdiff_t>(std::floor((front - U.grid.x0) / h));
    while (j >= 0 && U.x(static_cast<std::size_t>(j)) > front) --j;
    while (j + 1 < n && U.x(static_cast<std::size_t>(j + 1)) <= front) ++j;
    // samples still in the contact set belong to the V = 1 side even when the
    // front estimate lies a fraction of a cell behind them
    while (j + 1 < n && u[static_cast<std::size_t>(j + 1)] >= 1.0) ++j;
    auto at = [&](std::ptrdiff_t i) { return u[static_cast<std::size_t>(i)]; };
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        if (i <= j) {
            V.values[static_cast<std::size_t>(i)] = 1.0;
            continue;
        }
        double d;
        if (i - 2 > j && i + 2 < n) {
            d = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h);
        } else if (i + 4 < n) {
            d = (-25.0 * at(i) + 48.0 * at(i + 1) - 36.0 * at(i + 2) + 16.0 * at(i + 3) - 3.0 * at(i + 4)) /
                (12.0 * h);
        } else if (i - 4 > j) {
            d = (25.0 * at(i) - 48.0 * at(i - 1) + 36.0 * at(i - 2) - 16.0 * at(i - 3) + 3.0 * at(i - 4)) /
                (12.0 * h);
        } else {
            d = i + 1 < n ? (at(i + 1) - at(i)) / h : (at(i) - at(i - 1)) / h;
        }
        V.values[static_cast<std::size_t>(i)] = at(i) + 0.5 * beta * d;
    }
    return V;
}

Profile map_V_to_U(const Profile& V, double beta, std::optional<double> front) {
    require_beta(beta);
    const double k = 2.0 / beta;
    const auto& v = V.values;
    const std::size_t n = v.size();
    const double h = V.grid.dx;

    std::ptrdiff_t j;
    double L;
    if (front) {
        L = *front;
        j = static_cast<std::ptrdiff_t>(std::floor((L - V.grid.x0) / h));
        while (j >= 0 && V.x(static_cast<std::size_t>(j)) > L) --j;
        while (static_cast<std::size_t>(j + 1) < n && V.x(static_cast<std::size_t>(j + 1)) <= L) ++j;
    } else {
        j = -1;
        while (static_cast<std::size_t>(j + 1) < n && v[static_cast<std::size_t>(j + 1)] >= 1.0 - 1e-14) ++j;
        L = j >= 0 ? V.x(static_cast<std::size_t>(j)) : V.grid.x0;
    }
    if (j < 0) throw WindowError("front lies left of the window; V must equal 1 at the left edge");
    if (static_cast<std::size_t>(j) + 4 >= n) throw WindowError("front too close to the right edge");

    Profile U = V;
    auto& u = U.values;
    const auto js = static_cast<std::size_t>(j);
    for (std::size_t i = 0; i <= js; ++i) u[i] = 1.0;

    // the cell holding the front: V = 1 on [x_j, L], smooth on [L, x_{j+1}]
    {
        const double z[4] = {L, V.x(js + 1), V.x(js + 2), V.x(js + 3)};
        const double f[4] = {1.0, v[js + 1], v[js + 2], v[js + 3]};
        const double c = V.x(js + 1);
        u[js + 1] = std::exp(-k * (c - L)) + k * weighted_cell(L, c, k, z, f);
    }
    const double decay = std::exp(-k * h);
    for (std::size_t i = js + 1; i + 1 < n; ++i) {
        double z[4], f[4];
        std::size_t first = i - 1;
        if (i + 2 >= n) first = n - 4;
        for (int m = 0; m < 4; ++m) {
            const std::size_t idx = first + static_cast<std::size_t>(m);
            z[m] = V.x(idx);
            f[m] = v[idx];
        }
        if (first <= js) {  // stencil would reach behind the front
            z[0] = L;
            f[0] = 1.0;
        }
        u[i + 1] = decay * u[i] + k * weighted_cell(V.x(i), V.x(i + 1), k, z, f);
    }
    return U;
}

BetaSolveResult solve_beta(const BetaConfig& cfg, const Grid& grid, const solver::SolveOptions& opt) {
    validate(cfg);
    BetaSolveResult res;
    const auto U0 = map_V0_to_U0(cfg.V0, cfg.beta);
    auto sol = solver::solve_obstacle(U0, grid, opt);
    res.front = sol.front;
    for (const auto& p : sol.snapshots) {
        const double L = p.t == 0.0 ? left_edge(U0) : solver::extract_front(p, opt.eps, opt.front_method);
        res.V_snapshots.push_back(map_U_to_V(p, cfg.beta, L));
    }
    res.U_snapshots = std::move(sol.snapshots);
    res.U_final = std::move(sol.final_profile);
    const double L = res.U_final.t == 0.0 ? left_edge(U0)
                                          : solver::extract_front(res.U_final, opt.eps, opt.front_method);
    res.V_final = map_U_to_V(res.U_final, cfg.beta, L);
    res.I_beta = I_beta(cfg.V0, cfg.beta);
    return res;
}

double I_beta(const InitialCondition& V0, double beta) {
    require_beta(beta);
    const double rate = tail_rate(V0);
    const double power = tail_power(V0);
    const double L0 = left_edge(V0);
    if (beta < kSqrt2) {
        if (rate < kSqrt2 || (rate == kSqrt2 && power >= -2.0)) return kInf;
        if (std::holds_alternative<Heaviside>(V0)) return 0.0;
        const double lo = std::max(0.0, L0);
        double head = 0.0;
        if (L0 > 0.0) {  // V0 = 1 on [0, L0]: int x e^{sqrt2 x}
            auto F = [](double x) { return std::exp(kSqrt2 * x) * (x / kSqrt2 - 0.5); };
            head = F(L0) - F(0.0);
        }
        auto log_w = [](double x) { return x > 0.0 ? std::log(x) + kSqrt2 * x : kNegInf; };
        return head + tail_weighted_integral(V0, log_w, lo, rate - kSqrt2);
    }
    const double b = 2.0 / beta;
    if (rate < b || (rate == b && power >= -1.0)) return kInf;
    const double left = std::exp(b * L0) / b;
    if (std::holds_alternative<Heaviside>(V0)) return left;
    auto log_w = [b](double x) { return b * x; };
    return left + tail_weighted_integral(V0, log_w, L0, rate - b);
}

asym::AsymptoticPrediction front_prediction_beta(const BetaConfig& cfg, const std::vector<double>& times) {
    validate(cfg);
    const double beta = cfg.beta;
    const double needed = std::min(kSqrt2, 2.0 / beta);
    if (tail_rate(cfg.V0) < needed - 1e-12) {
        throw RegimeError("V0 decays slower than e^{-min(sqrt2, 2/beta) x}; no front prediction");
    }
    const double I = I_beta(cfg.V0, beta);
    const bool finite = std::isfinite(I);
    asym::AsymptoticPrediction p;
    const double log_sqrt_pi = std::log(std::sqrt(std::numbers::pi));

    auto pulled_template = [&](asym::Regime regime) {
        const auto U0 = map_V0_to_U0(cfg.V0, beta);
        p.regime = regime;
        p.linear = kSqrt2;
        p.log_coeff = asym::kBramsonLogCoeff;
        for (double t : times) p.b_curve.emplace_back(t, asym::b_of_t(U0, t));
    };

    if (is_pushmi(beta)) {
        p.regime = asym::Regime::PushmiPullyu;
        if (finite) {
            p.linear = kSqrt2;
            p.log_coeff = -1.0 / (2.0 * kSqrt2);
            p.constant = (std::log(kSqrt2 * I) - log_sqrt_pi) / kSqrt2;
        } else {
            pulled_template(asym::Regime::PushmiPullyu);
            p.constant = asym::infinite_mass_constant();
            p.note = "I_beta infinite: L_t - [sqrt2 t - log(t)/(2 sqrt2)] -> infinity; m(t) uses b(t)";
        }
    } else if (beta < kSqrt2) {
        if (finite) {
            pulled_template(asym::Regime::FiniteMassPulled);
        } else {
            pulled_template(asym::Regime::InfiniteMassPulled);
            p.constant = asym::infinite_mass_constant();
            p.note = "I_beta infinite: L_t - [sqrt2 t - 3 log(t)/(2 sqrt2)] -> infinity";
        }
    } else {
        p.regime = asym::Regime::Pushed;
        p.linear = waves::c_beta_min(beta);
        if (finite) {
            p.constant = 0.5 * beta * (std::log(2.0 / beta * I) + std::log(beta * beta - 2.0) - 2.0 * std::log(beta));
        } else {
            p.note = "I_beta infinite: L_t - c_min t -> infinity";
        }
    }
    return p;
}

double m_pushed(const BetaConfig& cfg, double t) {
    validate(cfg);
    if (!(cfg.beta > kSqrt2)) throw RegimeError("m_pushed needs beta > sqrt(2)");
    const auto U0 = map_V0_to_U0(cfg.V0, cfg.beta);
    const double b = cfg.beta;
    return asym::m_slow_decay(U0, t) + 0.5 * b * (std::log(b * b - 2.0) - 2.0 * std::log(b));
}

void write_regime_report(const std::filesystem::path& path, const BetaConfig& cfg) {
    const auto pred = front_prediction_beta(cfg);
    const double I = I_beta(cfg.V0, cfg.beta);
    nlohmann::json j;
    j["beta"] = cfg.beta;
    j["V0"] = format_ic(cfg.V0);
    j["regime"] = asym::regime_name(pred.regime);
    j["c_min"] = waves::c_beta_min(cfg.beta);
    j["I_beta"] = std::isfinite(I) ? nlohmann::json(I) : nlohmann::json("infinite");
    j["predicted_constant"] = pred.constant ? nlohmann::json(*pred.constant) : nlohmann::json(nullptr);
    j["log_coeff"] = pred.log_coeff;
    if (!pred.note.empty()) j["note"] = pred.note;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream(path) << j.dump(2) << '\n';
}

}  // namespace fbp::beta
