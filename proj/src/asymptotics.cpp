#include "fbplab/asymptotics.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "fbplab/csv.hpp"
#include "fbplab/errors.hpp"
#include "fbplab/quadrature.hpp"
#include "fbplab/waves.hpp"

namespace fbp::asym {
namespace {

constexpr double kSqrt2 = waves::kSqrt2;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// log Phi(z) for the standard normal CDF, usable far into the lower tail
double log_normal_cdf(double z) {
    const double p = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    if (p > 0.0) return std::log(p);
    // Mills-ratio asymptotics once erfc underflows
    return -0.5 * z * z - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi);
}

}  // namespace

double infinite_mass_constant() { return -std::log(std::sqrt(std::numbers::pi)) / kSqrt2; }

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::FiniteMassPulled: return "finite-mass-pulled";
        case Regime::InfiniteMassPulled: return "infinite-mass-pulled";
        case Regime::SlowerDecay: return "slower-decay";
        case Regime::HeavyTail: return "heavy-tail-case";
        case Regime::PushmiPullyu: return "pushmi-pullyu";
        case Regime::Pushed: return "pushed";
    }
    return "unknown";
}

double AsymptoticPrediction::shape(double t) const {
    double m = linear * t + log_coeff * std::log(t);
    if (loglog_coeff != 0.0) m += loglog_coeff * std::log(std::log(t));
    return m;
}

double AsymptoticPrediction::position(double t) const { return shape(t) + constant.value_or(0.0); }

bool finite_mass(const InitialCondition& ic) {
    const double rate = tail_rate(ic);
    if (rate > kSqrt2) return true;
    if (rate < kSqrt2) return false;
    return tail_power(ic) < -2.0;
}

double b_truncation(double t) { return 10.0 * std::sqrt(t) + 50.0; }

double b_of_t(const InitialCondition& ic, double t) {
    if (!(t > 0.0)) throw ParameterError("b(t) needs t > 0");
    const double Y = b_truncation(t);
    auto f = [&](double y) {
        if (y <= 0.0) return 0.0;
        const double lu = log_eval(ic, y);
        if (lu == kNegInf) return 0.0;
        return y * std::exp(kSqrt2 * y + lu - y * y / (2.0 * t));
    };
    const auto bps = breakpoints(ic);
    const auto q = quad::integrate_split(f, 0.0, Y, bps, 1e-10);
    if (!(q.error <= 1e-7 * std::max(1.0, q.value))) {
        throw PrecisionError("b(t) quadrature did not converge", q.error);
    }
    return std::log(q.value + 1.0) / kSqrt2;
}

double m_pulled(const InitialCondition& ic, double t, MassCase mass_case) {
    if (!(t >= 1.0)) throw ParameterError("m(t) is defined here for t >= 1");
    double m = kSqrt2 * t + kBramsonLogCoeff * std::log(t) + b_of_t(ic, t);
    if (mass_case == MassCase::Infinite) m += infinite_mass_constant();
    return m;
}

AsymptoticPrediction pulled_prediction(const InitialCondition& ic, MassCase mass_case,
                                       const std::vector<double>& times) {
    AsymptoticPrediction p;
    p.regime = mass_case == MassCase::Finite ? Regime::FiniteMassPulled : Regime::InfiniteMassPulled;
    p.linear = kSqrt2;
    p.log_coeff = kBramsonLogCoeff;
    if (mass_case == MassCase::Infinite) p.constant = infinite_mass_constant();
    for (double t : times) p.b_curve.emplace_back(t, b_of_t(ic, t));
    return p;
}

double log_heat_growth(const InitialCondition& ic, double t, double x) {
    if (!(t > 0.0)) throw ParameterError("heat growth needs t > 0");
    const double s = std::sqrt(t);
    const double L0 = left_edge(ic);
    // U0 = 1 on (-inf, L0]: Gaussian mass below L0
    const double log_left = log_normal_cdf((L0 - x) / s);

    // The integrand U0(y) e^{-(x-y)^2/2t} peaks near x - rate t for exponential
    // tails, so the range reaches that far back.
    const double rate = std::min(tail_rate(ic), 2.0);
    const double lo = std::max(L0, x - 40.0 * s - rate * t);
    const double hi = x + 12.0 * s;
    double log_right = kNegInf;
    if (hi > lo && !std::holds_alternative<Heaviside>(ic)) {
        // fixed 20-point Gauss-Legendre on panels no wider than one standard
        // deviation or one unit, split at the kinks of U0; summed in log space
        std::vector<double> cuts{lo, hi};
        for (double b : breakpoints(ic)) {
            if (b > lo && b < hi) cuts.push_back(b);
        }
        std::sort(cuts.begin(), cuts.end());
        const double h = std::min(s, 1.0);
        std::vector<double> logs;
        const auto& nodes = boost::math::quadrature::gauss<double, 20>::abscissa();
        const auto& weights = boost::math::quadrature::gauss<double, 20>::weights();
        double peak = kNegInf;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const auto panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((cuts[c + 1] - cuts[c]) / h)));
            const double w = (cuts[c + 1] - cuts[c]) / static_cast<double>(panels);
            for (std::size_t k = 0; k < panels; ++k) {
                const double mid = cuts[c] + (static_cast<double>(k) + 0.5) * w;
                // the rule stores the non-negative half of a symmetric rule
                for (std::size_t q = 0; q < nodes.size(); ++q) {
                    for (int sign : {-1, 1}) {
                        if (sign < 0 && nodes[q] == 0.0) continue;
                        const double y = mid + sign * 0.5 * w * nodes[q];
                        const double lu = log_eval(ic, y);
                        if (lu == kNegInf) continue;
                        const double l = lu - (x - y) * (x - y) / (2.0 * t) + std::log(0.5 * w * weights[q]);
                        logs.push_back(l);
                        peak = std::max(peak, l);
                    }
                }
            }
        }
        if (peak > kNegInf) {
            double sum = 0.0;
            for (double l : logs) sum += std::exp(l - peak);
            log_right = peak + std::log(sum) - 0.5 * std::log(2.0 * std::numbers::pi * t);
        }
    }
    return t + log_sum_exp(log_left, log_right);
}

double m_slow_decay(const InitialCondition& ic, double t) {
    if (!(t > 0.0)) throw ParameterError("m(t) needs t > 0");
    auto F = [&](double x) { return log_heat_growth(ic, t, x); };
    double lo = left_edge(ic), hi = lo + 1.0;
    for (int k = 0; F(lo) < 0.0; ++k) {
        if (k > 60) throw WindowError("no lower bracket for m(t)");
        lo -= std::ldexp(1.0, k);
    }
    for (int k = 0; F(hi) >= 0.0; ++k) {
        if (k > 60) throw WindowError("no upper bracket for m(t)");
        hi = lo + std::ldexp(2.0, k);
    }
    while (hi - lo > 1e-10 * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        (F(mid) >= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double slow_decay_offset(double c) {
    const auto wp = waves::WaveParams::make(c);
    if (wp.degenerate()) throw DomainError("slow-decay offset needs c > sqrt(2)");
    return (std::log(std::sqrt(c * c - 2.0)) + std::log(wp.a_c)) / wp.a_c;
}

double gaussian_moment(double nu) {
    if (!(nu > -2.0)) throw DomainError("moment of y^{1+nu} e^{-y^2/2} diverges for nu <= -2");
    // s = y^{2+nu} removes the endpoint singularity for -2 < nu < -1
    const double p = 2.0 + nu;
    auto f = [p](double s) { return std::exp(-0.5 * std::pow(s, 2.0 / p)) / p; };
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f);
}

AsymptoticPrediction heavy_tail_prediction(double A, double nu) {
    if (!(A > 0.0)) throw DomainError("heavy-tail amplitude A must be positive");
    AsymptoticPrediction p;
    p.regime = Regime::HeavyTail;
    p.linear = kSqrt2;
    if (nu < -2.0) {
        p.log_coeff = kBramsonLogCoeff;
        p.note = "constant depends on the whole of U0; fit it";
    } else if (nu == -2.0) {
        p.log_coeff = kBramsonLogCoeff;
        p.loglog_coeff = 1.0 / kSqrt2;
        p.constant = std::log(A / (2.0 * std::sqrt(std::numbers::pi))) / kSqrt2;
    } else {
        p.log_coeff = (nu - 1.0) / (2.0 * kSqrt2);
        p.constant = std::log(A / std::sqrt(std::numbers::pi) * gaussian_moment(nu)) / kSqrt2;
    }
    return p;
}

FitResult fit_front(const FrontTrace& front, const AsymptoticPrediction& tmpl, double T1, double T2) {
    if (!(T1 >= 1.0 && T2 >= 2.0 * T1)) throw ParameterError("fit window needs T2 >= 2 T1 >= 2");
    if (!front.covers(T1) || !front.covers(T2)) throw ParameterError("fit window outside the front trace");
    std::vector<double> dev;
    for (std::size_t k = 0; k < front.size(); ++k) {
        const double t = front.times[k];
        if (t < T1 - 1e-9 || t > T2 + 1e-9) continue;
        dev.push_back(front.positions[k] - tmpl.shape(t));
    }
    if (dev.empty()) throw ParameterError("no trace samples inside the fit window");
    FitResult r;
    r.samples = dev.size();
    for (double d : dev) r.constant += d;
    r.constant /= static_cast<double>(dev.size());
    const auto [mn, mx] = std::minmax_element(dev.begin(), dev.end());
    r.spread = *mx - *mn;
    for (double d : dev) r.residual = std::max(r.residual, std::abs(d - r.constant));
    return r;
}

void write_prediction(const std::filesystem::path& path, const FrontTrace& front,
                      const AsymptoticPrediction& pred, double T1, double T2) {
    std::vector<std::vector<double>> cols(4);
    for (std::size_t k = 0; k < front.size(); ++k) {
        const double t = front.times[k];
        if (t < T1 || t > T2 || t <= 0.0) continue;
        const double m = pred.position(t);
        cols[0].push_back(t);
        cols[1].push_back(m);
        cols[2].push_back(front.positions[k]);
        cols[3].push_back(front.positions[k] - m);
    }
    io::write_csv(path, {"t", "m_pred", "L_solver", "deviation"}, cols);
}

}  // namespace fbp::asym
