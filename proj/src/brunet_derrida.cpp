#include "fbplab/brunet_derrida.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbplab/csv.hpp"
#include "fbplab/errors.hpp"
#include "fbplab/quadrature.hpp"
#include "fbplab/waves.hpp"

namespace fbp::bd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool moment_diverges(const InitialCondition& ic, double r) {
    const double rate = tail_rate(ic);
    if (r < rate) return false;
    if (r > rate) return true;
    // r equals the decay rate: x^p e^{0} is integrable only for p < -1
    return tail_power(ic) >= -1.0;
}

// int_a^b exp(g) for g linear from g0 to g1 over a step of length h
double exp_segment(double g0, double g1, double h) {
    const double d = g1 - g0;
    if (std::abs(d) < 1e-12) return h * std::exp(g0 + 0.5 * d);
    return h * std::exp(g0) * std::expm1(d) / d;
}

double time_integral(const FrontTrace& f, double r, std::size_t stride) {
    const double kappa = 1.0 + 0.5 * r * r;
    auto g = [&](std::size_t k) { return r * f.positions[k] - kappa * f.times[k]; };
    double sum = 0.0;
    std::size_t k = 0;
    while (k + 1 < f.size()) {
        const std::size_t next = std::min(k + stride, f.size() - 1);
        sum += exp_segment(g(k), g(next), f.times[next] - f.times[k]);
        k = next;
    }
    return sum;
}

}  // namespace

void check_r(double r) {
    if (!std::isfinite(r) || r == 0.0) throw DomainError("Brunet-Derrida relation needs r != 0");
    if (r >= waves::kSqrt2) {
        throw DomainError("Brunet-Derrida relation is not valid for r >= sqrt(2)");
    }
}

double bd_lhs(const InitialCondition& ic, double r) {
    check_r(r);
    if (moment_diverges(ic, r)) return kInf;
    const double L0 = left_edge(ic);
    auto f = [&](double x) { return eval(ic, x) * std::exp(r * x); };
    // log form for the tail, where U0 underflows long before e^{r x} overflows
    auto f_log = [&](double x) {
        const double l = log_eval(ic, x) + r * x;
        return l == -kInf ? 0.0 : std::exp(l);
    };
    const auto bps = breakpoints(ic);

    if (const auto* t = std::get_if<Tabulated>(&ic)) {
        return quad::integrate_split(f, L0, t->xs.back(), bps).value;
    }
    if (std::holds_alternative<Heaviside>(ic)) return 0.0;

    // finite part up to X, then the tail on its natural scale 1/(rate - r)
    const double X = std::max(L0, *std::max_element(bps.begin(), bps.end())) + 1.0;
    double k = tail_rate(ic) - r;
    if (!std::isfinite(k) || k <= 0.0) k = 1.0;
    const double head = quad::integrate_split(f, L0, X, bps).value;
    const double tail = quad::integrate([&](double s) { return f_log(X + s / k); }, 0.0, kInf).value / k;
    return head + tail;
}

double fitted_tail_speed(const FrontTrace& front) {
    if (front.size() < 2) throw ParameterError("front trace too short to fit a tail speed");
    const double T = front.times.back();
    const double t0 = front.times.front();
    const double half = std::max(t0, 0.5 * T);
    if (!(T > half)) throw ParameterError("front trace too short to fit a tail speed");
    return (front.positions.back() - front.at(half)) / (T - half);
}

RhsResult bd_rhs(const FrontTrace& front, double L0, double r, std::optional<double> tail_speed) {
    check_r(r);
    if (front.size() < 3) throw ParameterError("front trace needs at least 3 samples");
    RhsResult res;
    res.tail_speed = tail_speed ? *tail_speed : fitted_tail_speed(front);
    const double kappa = 1.0 + 0.5 * r * r;
    const double rate = kappa - r * res.tail_speed;

    const double fine = time_integral(front, r, 1);
    const double coarse = time_integral(front, r, 2);
    if (!(rate > 0.0)) {
        res.value = kInf;
        res.tail_fraction = 1.0;
        res.quad_error = std::abs(fine - coarse) / std::abs(r);
        return res;
    }
    const double gT = r * front.positions.back() - kappa * front.times.back();
    const double tail = std::exp(gT) / rate;
    const double total = fine + tail;
    res.value = -std::exp(r * L0) / r + total / r;
    res.tail_fraction = total > 0.0 ? tail / total : 0.0;
    res.quad_error = std::abs(fine - coarse) / std::abs(r);
    return res;
}

BDReport bd_check(const InitialCondition& ic, const FrontTrace& front, double r, double rel_tol) {
    BDReport rep;
    rep.r = r;
    rep.lhs = bd_lhs(ic, r);
    const auto rhs = bd_rhs(front, left_edge(ic), r);
    rep.rhs = rhs.value;
    rep.tail_fraction = rhs.tail_fraction;
    rep.quad_error = rhs.quad_error;
    const bool lhs_inf = std::isinf(rep.lhs), rhs_inf = std::isinf(rep.rhs);
    if (lhs_inf || rhs_inf) {
        rep.rel_err = lhs_inf == rhs_inf ? 0.0 : kInf;
        rep.pass = lhs_inf == rhs_inf;
        return rep;
    }
    if (rep.lhs == 0.0) {
        rep.rel_err = std::abs(rep.rhs);
        rep.pass = rep.rel_err <= kDegenerateAtol && rep.tail_fraction <= kMaxTailFraction;
        return rep;
    }
    rep.rel_err = std::abs(rep.lhs - rep.rhs) / std::max(std::abs(rep.lhs), 0.1);
    rep.pass = rep.rel_err <= rel_tol && rep.tail_fraction <= kMaxTailFraction;
    return rep;
}

double r0_of(const InitialCondition& ic) {
    // every parametric family decays like x^p e^{-rate x}; tables have
    // compact support, so all moments below sqrt(2) are finite
    return std::min(tail_rate(ic), waves::kSqrt2);
}

double speed_from_r0(double r0) {
    if (!(r0 >= 0.0 && r0 <= waves::kSqrt2 + 1e-15)) throw DomainError("r0 must lie in [0, sqrt(2)]");
    if (r0 == 0.0) return kInf;
    return 1.0 / r0 + 0.5 * r0;
}

void write_report(const std::filesystem::path& path, const std::vector<BDReport>& rows) {
    std::vector<std::vector<double>> cols(6);
    for (const auto& row : rows) {
        cols[0].push_back(row.r);
        cols[1].push_back(row.lhs);
        cols[2].push_back(row.rhs);
        cols[3].push_back(row.rel_err);
        cols[4].push_back(row.tail_fraction);
        cols[5].push_back(row.pass ? 1.0 : 0.0);
    }
    io::write_csv(path, {"r", "lhs", "rhs", "rel_err", "tail_fraction", "verdict"}, cols);
}

}  // namespace fbp::bd
