#include "subdiff/laplace_inversion.hpp"

#include "subdiff/error.hpp"

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include <cmath>
#include <limits>

namespace subdiff {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ContourParams {
    double angle;   // a: asymptotic direction is pi/2 + a
    double strip;   // d: half-width of the analyticity strip in u
    double h;
    double M;       // mu * t
    double score;   // -ln(predicted relative error)
};

ContourParams optimise(int nodes, double opening) {
    const double A = 0.94 * opening;
    ContourParams best{0.746 / 0.94 * A, 0.19 / 0.94 * A, 0.0, 0.0, -1.0};
    // Roughly 10 digits are lost in the worst case to exp(M (1 - sin(a - d))) if left
    // unchecked; the score caps the conditioning at what double precision can absorb.
    const double log_eps = -std::log(std::numeric_limits<double>::epsilon());
    const double a = best.angle;
    const double d = best.strip;
    for (int i = 1; i <= 4000; ++i) {
        const double h = i * (6.0 / nodes) / 4000.0;
        const double hN = h * nodes;
        const double denom = std::sin(a) * std::cosh(hN) - std::sin(a - d);
        if (denom <= 0.0) continue;
        const double M = 2.0 * kPi * d / h / denom;
        const double rate = M * (std::sin(a) * std::cosh(hN) - 1.0);
        const double conditioning = M * (1.0 - std::sin(a - d));
        const double score = std::min(rate, log_eps - conditioning);
        if (score > best.score) {
            best.h = h;
            best.M = M;
            best.score = score;
        }
    }
    return best;
}

}  // namespace

HyperbolicInverter::HyperbolicInverter(double opening, double target, int min_nodes, int max_nodes)
    : opening_(opening) {
    if (!(opening > 0.0 && opening <= kPi / 2 + 1e-12))
        fail(ErrorCode::Domain, "HyperbolicInverter: opening must lie in (0, pi/2]");
    if (!(target > 0.0)) fail(ErrorCode::Domain, "HyperbolicInverter: target must be positive");
    const double want = -std::log(target);
    int n = std::max(8, min_nodes);
    for (; n < max_nodes; n += 4)
        if (optimise(n, opening).score >= want) break;
    build(n);
}

HyperbolicInverter::HyperbolicInverter(double opening, int nodes) : opening_(opening) { build(nodes); }

HyperbolicInverter HyperbolicInverter::coarse() const {
    return HyperbolicInverter(opening_, std::max(8, (2 * nodes()) / 3));
}

void HyperbolicInverter::build(int nodes) {
    const ContourParams p = optimise(nodes, opening_);
    predicted_error_ = std::exp(-p.score);
    node_.clear();
    coeff_.clear();
    node_.reserve(nodes + 1);
    coeff_.reserve(nodes + 1);
    const cplx i{0.0, 1.0};
    for (int k = 0; k <= nodes; ++k) {
        const double u = k * p.h;
        const cplx zhat = 1.0 + std::sin(i * u - p.angle);
        const cplx dzhat = i * std::cos(i * u - p.angle);
        node_.push_back(p.M * zhat);
        coeff_.push_back((p.h / kPi) * p.M * std::exp(p.M * zhat) * dzhat);
    }
}

std::optional<double> saddle_trapezoid(const std::function<cplx(cplx)>& transform, double t, double c,
                                       double curvature, double gap, double& error, double log_scale,
                                       double floor) {
    if (!(curvature > 0.0) || !(gap > 0.0)) return std::nullopt;
    constexpr int kMaxTerms = 4000;
    constexpr double kDigits = 34.0;  // ~ -ln(1e-15)
    // Discretisation error ~ exp(curvature d^2 / 2 - 2 pi d / h) for a strip half-width d <= gap.
    const double width = 1.0 / std::sqrt(curvature);
    const double h = std::min(0.8 * width, 2.0 * kPi * gap / kDigits);
    auto term = [&](double y) { return (std::exp(cplx(0.0, y * t)) * transform(cplx(c, y))).real(); };

    const double f0 = 0.5 * term(0.0);
    double even = f0;  // nodes k h
    double odd = 0.0;  // nodes (k + 1/2) h
    int quiet = 0;
    for (int k = 1; k <= kMaxTerms; ++k) {
        const double a = term(k * h);
        const double b = term((k - 0.5) * h);
        even += a;
        odd += b;
        const double scale = std::abs(even) + std::abs(odd) + std::abs(f0);
        const bool small = std::abs(a) + std::abs(b) <= 1e-17 * scale;
        quiet = small ? quiet + 1 : 0;
        if (!std::isfinite(even + odd)) return std::nullopt;
        if (quiet >= 4 && k * h > 8.0 * width) {
            const double pref = std::exp(c * t + log_scale) / kPi;
            const double coarse = pref * h * even;
            const double fine = pref * 0.5 * h * (even + odd);
            error = std::abs(fine - coarse);
            if (!(error <= 1e-9 * std::max(std::abs(fine), floor) + 1e-300)) return std::nullopt;
            return fine;
        }
    }
    return std::nullopt;
}

double bromwich_line(const std::function<cplx(cplx)>& transform, double t, double c, double& error,
                     double log_scale) {
    using boost::math::quadrature::ooura_fourier_cos;
    using boost::math::quadrature::ooura_fourier_sin;
    // Node tables are built lazily by the integrators; one set per thread.
    thread_local ooura_fourier_cos<double> cos_rule(1e-11, 8);
    thread_local ooura_fourier_sin<double> sin_rule(1e-11, 8);
    auto re = [&](double y) { return transform(cplx(c, y)).real(); };
    auto im = [&](double y) { return transform(cplx(c, y)).imag(); };
    const auto [vc, ec] = cos_rule.integrate(re, t);
    const auto [vs, es] = sin_rule.integrate(im, t);
    const double scale = std::exp(c * t + log_scale) / kPi;
    error = scale * (std::abs(ec * vc) + std::abs(es * vs));
    return scale * (vc - vs);
}

std::vector<long double> stehfest_weights(int n) {
    if (n < 2 || n % 2 != 0 || n > 30) fail(ErrorCode::Domain, "stehfest_weights: n must be even and <= 30");
    auto fact = [](int m) {
        long double r = 1.0L;
        for (int i = 2; i <= m; ++i) r *= i;
        return r;
    };
    const int half = n / 2;
    std::vector<long double> v(n);
    for (int k = 1; k <= n; ++k) {
        long double s = 0.0L;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            s += std::pow(static_cast<long double>(j), half) * fact(2 * j) /
                 (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
        }
        v[k - 1] = ((half + k) % 2 == 0 ? 1.0L : -1.0L) * s;
    }
    return v;
}

}  // namespace subdiff
