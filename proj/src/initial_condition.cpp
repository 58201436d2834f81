#include "fbplab/initial_condition.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>

#include "fbplab/csv.hpp"
#include "fbplab/errors.hpp"
#include "fbplab/waves.hpp"

namespace fbp {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_power_exp(const PowerExpTail& p, double x) {
    return std::log(p.A) + p.nu * std::log(x) - p.lam * x;
}

// Root of a strictly decreasing function on [lo, hi].
template <class F>
double bisect_decreasing(F f, double lo, double hi) {
    auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); };
    std::uintmax_t iters = 400;
    auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol, iters);
    return 0.5 * (a + b);
}

double tabulated_eval(const Tabulated& t, double x) {
    if (x <= t.xs.front()) return t.us.front();
    if (x >= t.xs.back()) return 0.0;
    const auto it = std::upper_bound(t.xs.begin(), t.xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - t.xs.begin()) - 1;
    const double w = (x - t.xs[i]) / (t.xs[i + 1] - t.xs[i]);
    return (1.0 - w) * t.us[i] + w * t.us[i + 1];
}

std::vector<double> parse_numbers(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

}  // namespace

double power_exp_root(const PowerExpTail& p) {
    if (!(p.A > 0.0) || !(p.lam > 0.0)) throw ValidationError("powexp requires A > 0 and lam > 0");
    if (p.nu == 0.0) return std::log(p.A) / p.lam;
    auto g = [&](double x) { return log_power_exp(p, x); };
    double lo;
    if (p.nu < 0.0) {
        lo = 1e-300;
    } else {
        lo = p.nu / p.lam;  // maximiser of g
        if (g(lo) < 0.0) {
            throw ValidationError("powexp with nu > 0 never reaches 1; U0 would not be non-increasing");
        }
    }
    double hi = std::max(1.0, 2.0 * lo);
    while (g(hi) > 0.0) hi *= 2.0;
    return bisect_decreasing(g, lo, hi);
}

void validate(const InitialCondition& ic) {
    std::visit(overloaded{
                   [](const Heaviside&) {},
                   [](const PowerExpTail& p) {
                       if (!std::isfinite(p.nu)) throw ValidationError("powexp nu must be finite");
                       (void)power_exp_root(p);
                   },
                   [](const Wave& w) {
                       if (!(w.c >= waves::kSqrt2 - waves::kDegenerateTol))
                           throw ValidationError("wave speed must be >= sqrt(2)");
                   },
                   [](const BetaWave& b) {
                       if (!(b.beta > 0.0)) throw ValidationError("betawave requires beta > 0");
                   },
                   [](const TwoRate& r) {
                       if (!(r.a > 0.0) || !(r.b > 0.0)) throw ValidationError("tworate requires positive rates");
                   },
                   [](const Tabulated& t) {
                       if (t.xs.size() < 2 || t.xs.size() != t.us.size())
                           throw ValidationError("table needs >= 2 rows of equal length");
                       if (t.us.front() != 1.0) throw ValidationError("table must start at U0 = 1 (finite L0)");
                       for (std::size_t i = 0; i < t.xs.size(); ++i) {
                           if (t.us[i] < 0.0 || t.us[i] > 1.0) throw ValidationError("table values outside [0,1]");
                           if (i > 0 && !(t.xs[i] > t.xs[i - 1])) throw ValidationError("table x not increasing");
                           if (i > 0 && t.us[i] > t.us[i - 1]) throw ValidationError("table U0 increasing");
                       }
                   },
               },
               ic);
}

double eval(const InitialCondition& ic, double x) {
    return std::visit(overloaded{
                          [x](const Heaviside&) { return x < 0.0 ? 1.0 : 0.0; },
                          [x](const PowerExpTail& p) {
                              // A x^nu e^{-lam x} is decreasing on the relevant
                              // range, so the clamp at 1 locates x* implicitly.
                              if (p.nu == 0.0) return std::min(1.0, p.A * std::exp(-p.lam * x));
                              if (x <= 0.0 || (p.nu > 0.0 && x < p.nu / p.lam)) return 1.0;
                              return std::min(1.0, std::exp(log_power_exp(p, x)));
                          },
                          [x](const Wave& w) { return waves::Pi_c(w.c, x); },
                          [x](const BetaWave& b) { return waves::Pi_beta_min(b.beta, x); },
                          [x](const TwoRate& r) {
                              if (x <= 0.0) return 1.0;
                              const double lo = std::min(r.a, r.b);
                              const double d = std::abs(r.b - r.a);
                              if (d == 0.0) return (1.0 + lo * x) * std::exp(-lo * x);
                              return std::exp(-lo * x) * (1.0 + lo * -std::expm1(-d * x) / d);
                          },
                          [x](const Tabulated& t) { return tabulated_eval(t, x); },
                      },
                      ic);
}

double log_eval(const InitialCondition& ic, double x) {
    return std::visit(overloaded{
                          [&](const PowerExpTail& p) {
                              if (x <= 0.0 || (p.nu > 0.0 && x < p.nu / p.lam)) return 0.0;
                              return std::min(0.0, log_power_exp(p, x));
                          },
                          [&](const Wave& w) {
                              if (x <= 0.0) return 0.0;
                              const auto wp = waves::WaveParams::make(w.c);
                              if (wp.degenerate()) return std::log1p(waves::kSqrt2 * x) - waves::kSqrt2 * x;
                              const double d = wp.b_c - wp.a_c;
                              return -wp.a_c * x + std::log1p(wp.a_c * -std::expm1(-d * x) / d);
                          },
                          [&](const BetaWave& b) {
                              if (x <= 0.0) return 0.0;
                              if (b.beta >= waves::kSqrt2) return -b.beta * x;
                              return std::log1p((waves::kSqrt2 - b.beta) * x) - waves::kSqrt2 * x;
                          },
                          [&](const TwoRate& r) {
                              if (x <= 0.0) return 0.0;
                              const double lo = std::min(r.a, r.b);
                              const double d = std::abs(r.b - r.a);
                              if (d == 0.0) return std::log1p(lo * x) - lo * x;
                              return -lo * x + std::log1p(lo * -std::expm1(-d * x) / d);
                          },
                          [&](const auto&) { return std::log(eval(ic, x)); },
                      },
                      ic);
}

double left_edge(const InitialCondition& ic) {
    return std::visit(overloaded{
                          [](const PowerExpTail& p) { return power_exp_root(p); },
                          [](const Tabulated& t) {
                              std::size_t k = 0;
                              while (k + 1 < t.us.size() && t.us[k + 1] == 1.0) ++k;
                              return t.xs[k];
                          },
                          [](const auto&) { return 0.0; },
                      },
                      ic);
}

double tail_rate(const InitialCondition& ic) {
    return std::visit(overloaded{
                          [](const Heaviside&) { return kInf; },
                          [](const PowerExpTail& p) { return p.lam; },
                          [](const Wave& w) { return waves::WaveParams::make(w.c).a_c; },
                          [](const BetaWave& b) { return b.beta > waves::kSqrt2 ? b.beta : waves::kSqrt2; },
                          [](const TwoRate& r) { return std::min(r.a, r.b); },
                          [](const Tabulated&) { return kInf; },
                      },
                      ic);
}

double tail_power(const InitialCondition& ic) {
    return std::visit(overloaded{
                          [](const PowerExpTail& p) { return p.nu; },
                          [](const Wave& w) { return waves::WaveParams::make(w.c).degenerate() ? 1.0 : 0.0; },
                          [](const BetaWave& b) { return b.beta < waves::kSqrt2 ? 1.0 : 0.0; },
                          [](const TwoRate& r) { return r.a == r.b ? 1.0 : 0.0; },
                          [](const auto&) { return 0.0; },
                      },
                      ic);
}

std::vector<double> breakpoints(const InitialCondition& ic) {
    return std::visit(overloaded{
                          [](const PowerExpTail& p) { return std::vector<double>{power_exp_root(p)}; },
                          [](const Tabulated& t) { return t.xs; },
                          [](const auto&) { return std::vector<double>{0.0}; },
                      },
                      ic);
}

double right_extent(const InitialCondition& ic, double tol) {
    if (const auto* t = std::get_if<Tabulated>(&ic)) {
        for (std::size_t i = 0; i < t->us.size(); ++i) {
            if (t->us[i] < tol) return t->xs[i];
        }
        return t->xs.back();
    }
    double lo = left_edge(ic);
    double hi = std::max(lo, 0.0) + 1.0;
    while (eval(ic, hi) >= tol) {
        lo = hi;
        hi = 2.0 * hi + 1.0;
    }
    return bisect_decreasing([&](double x) { return eval(ic, x) - tol; }, lo, hi);
}

double sample(const InitialCondition& ic, std::mt19937_64& rng) {
    if (std::holds_alternative<Heaviside>(ic)) return 0.0;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double v = 0.0;
    while (v == 0.0) v = unif(rng);
    double lo = left_edge(ic);
    double hi = std::max(lo, 0.0) + 1.0;
    while (eval(ic, hi) > v) {
        lo = hi;
        hi = 2.0 * hi + 1.0;
    }
    // sup{x : U0(x) > v}
    for (int i = 0; i < 64 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (eval(ic, mid) > v ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

InitialCondition parse_ic(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    InitialCondition ic;
    if (kind == "heaviside") {
        ic = Heaviside{};
    } else if (kind == "powexp") {
        const auto v = parse_numbers(args);
        if (v.size() != 3) throw ValidationError("powexp expects A,nu,lam");
        ic = PowerExpTail{v[0], v[1], v[2]};
    } else if (kind == "wave") {
        const auto v = parse_numbers(args);
        ic = Wave{v.empty() ? waves::kSqrt2 : v[0]};
    } else if (kind == "betawave") {
        const auto v = parse_numbers(args);
        if (v.size() != 1) throw ValidationError("betawave expects beta");
        ic = BetaWave{v[0]};
    } else if (kind == "tworate") {
        const auto v = parse_numbers(args);
        if (v.size() != 2) throw ValidationError("tworate expects a,b");
        ic = TwoRate{v[0], v[1]};
    } else if (kind == "table") {
        const auto t = io::read_csv(args);
        ic = Tabulated{t.columns.at(0), t.columns.at(1)};
    } else {
        throw ValidationError("unknown initial condition '" + spec + "'");
    }
    validate(ic);
    return ic;
}

std::string format_ic(const InitialCondition& ic) {
    using io::fmt_exact;
    return std::visit(
        overloaded{
            [](const Heaviside&) { return std::string("heaviside"); },
            [](const PowerExpTail& p) {
                return "powexp:" + fmt_exact(p.A) + "," + fmt_exact(p.nu) + "," + fmt_exact(p.lam);
            },
            [](const Wave& w) { return "wave:" + fmt_exact(w.c); },
            [](const BetaWave& b) { return "betawave:" + fmt_exact(b.beta); },
            [](const TwoRate& r) { return "tworate:" + fmt_exact(r.a) + "," + fmt_exact(r.b); },
            [](const Tabulated& t) { return "table:<" + std::to_string(t.xs.size()) + " rows>"; },
        },
        ic);
}

std::string ic_name(const InitialCondition& ic) {
    static constexpr const char* names[] = {"heaviside", "powexp", "wave", "betawave", "tworate", "table"};
    return names[ic.index()];
}

}  // namespace fbp
