#include "subdiff/specfun.hpp"

#include "subdiff/error.hpp"
#include "subdiff/quadrature.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace subdiff {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kEulerGamma = boost::math::constants::euler<double>();

// Lower incomplete gamma by its power series, a > 0.
double lower_gamma_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x));
}

// Legendre continued fraction for Gamma(a, x) (modified Lentz); valid for x > 0, any a.
double upper_gamma_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    const double log_prefactor = -x + a * std::log(x);
    if (log_prefactor < -760.0) return 0.0;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 4.0 * std::numeric_limits<double>::epsilon()) return std::exp(log_prefactor) * h;
    }
    fail(ErrorCode::Accuracy, "upper_incomplete_gamma: continued fraction did not converge",
         std::exp(log_prefactor) * h);
}

// E_1(x) = Gamma(0, x) for 0 < x < 1.
double expint_e1_series(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -x / k;
        const double add = -term / k;
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
}

double ml_series(double alpha, double x, double tol) {
    double sum = 0.0;
    const double lx = std::log(x);
    for (int n = 0; n < 2000; ++n) {
        const double mag = std::exp(n * lx - std::lgamma(1.0 + n * alpha));
        sum += (n % 2 == 0) ? mag : -mag;
        if (n > 2 && mag < 1e-3 * tol * std::abs(sum)) return sum;
    }
    fail(ErrorCode::Accuracy, "mittag_leffler: power series did not converge", sum);
}

// Algebraic expansion E_alpha(-x) ~ sum_k (-1)^(k+1) x^-k / Gamma(1 - alpha k).
// Returns NaN when the terms stop decreasing before reaching the tolerance.
double ml_asymptotic(double alpha, double x, double tol) {
    double sum = 0.0;
    double prev_bound = std::numeric_limits<double>::infinity();
    const double lx = std::log(x);
    for (int k = 1; k < 400; ++k) {
        // 1/Gamma(1 - y) = Gamma(y) sin(pi y) / pi
        const double bound = std::exp(std::lgamma(alpha * k) - k * lx) / kPi;
        if (bound > prev_bound) return std::numeric_limits<double>::quiet_NaN();
        prev_bound = bound;
        const double term = bound * boost::math::sin_pi(alpha * k);
        sum += (k % 2 == 1) ? term : -term;
        if (bound < 1e-3 * tol * std::abs(sum)) return sum;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double ml_branch_cut(double alpha, double x, double tol) {
    // Branch-cut form
    //   E_alpha(-x) = sin(pi alpha)/(pi alpha) int_0^inf exp(-(x s)^(1/alpha)) / ((s + c)^2 + w^2) ds,
    // c = cos(pi alpha), w = sin(pi alpha). With s = -c + w tan(phi) the Lorentzian factor
    // cancels and the integrand is bounded by 1 on [phi_0, pi/2], tan(phi_0) = c / w.
    const double c = std::cos(kPi * alpha);
    const double w = std::sin(kPi * alpha);
    const double inv_alpha = 1.0 / alpha;
    auto f = [&](double phi) {
        const double s = std::max(0.0, -c + w * std::tan(phi));
        return std::exp(-std::pow(x * s, inv_alpha));
    };
    const double phi0 = std::atan2(c, w);
    const double phi1 = std::atan2(1.0 / x + c, w);  // s = 1/x
    const double rel = std::max(1e-14, 0.01 * tol);
    // (x s)^(1/alpha) is not smooth at phi_0: tanh-sinh there, Gauss-Kronrod beyond.
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    double head_err = 0.0;
    const double head = ts.integrate(f, phi0, phi1, rel, &head_err);
    const auto tail = quad::adaptive(f, phi1, kPi / 2, rel, 12);
    const double value = (head + tail.value) / (alpha * kPi);
    const double err = (head_err * std::abs(head) + tail.error) / (alpha * kPi);
    if (!(err <= 10.0 * tol * std::abs(value)))
        fail(ErrorCode::Accuracy, "mittag_leffler: quadrature did not reach tolerance", value);
    return value;
}

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0)) fail(ErrorCode::Domain, "gamma_fn: argument must be positive, got " + std::to_string(x));
    return std::tgamma(x);
}

double rgamma(double x) noexcept {
    if (x >= 0.5) {
        if (x > 171.0) return std::exp(-std::lgamma(x));
        return 1.0 / std::tgamma(x);
    }
    // Reflection: 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
    const double s = boost::math::sin_pi(x);
    if (s == 0.0) return 0.0;
    return s * std::exp(std::lgamma(1.0 - x)) / kPi;
}

double upper_incomplete_gamma(double nu, double x) {
    if (!(x > 0.0)) fail(ErrorCode::Domain, "upper_incomplete_gamma: x must be positive");
    if (!std::isfinite(nu)) fail(ErrorCode::Domain, "upper_incomplete_gamma: nu must be finite");
    if (nu > 0.0) {
        if (x < nu + 1.0) return std::tgamma(nu) - lower_gamma_series(nu, x);
        return upper_gamma_cf(nu, x);
    }
    if (x >= 1.0) return upper_gamma_cf(nu, x);
    // Small x, nu <= 0: start from a0 in [0, 1) and recur downwards with
    // Gamma(a, x) = (Gamma(a + 1, x) - x^a e^-x) / a.
    const int steps = static_cast<int>(std::ceil(-nu));
    const double a0 = nu + steps;
    double g = (a0 == 0.0) ? expint_e1_series(x) : std::tgamma(a0) - lower_gamma_series(a0, x);
    double a = a0;
    for (int i = 0; i < steps; ++i) {
        a -= 1.0;
        g = (g - std::exp(a * std::log(x) - x)) / a;
    }
    return g;
}

double erf_fn(double x) noexcept { return std::erf(x); }

double mittag_leffler(const MLParams& p) {
    if (!(p.alpha > 0.0 && p.alpha <= 1.0))
        fail(ErrorCode::Domain, "mittag_leffler: alpha must lie in (0, 1]");
    if (!(p.z <= 0.0)) fail(ErrorCode::Domain, "mittag_leffler: only z <= 0 is supported");
    if (!(p.tol > 0.0)) fail(ErrorCode::Domain, "mittag_leffler: tolerance must be positive");
    if (p.alpha == 1.0) return std::exp(p.z);
    const double x = -p.z;
    if (x == 0.0) return 1.0;
    if (x <= 0.5) return ml_series(p.alpha, x, p.tol);
    if (x >= 50.0) {
        const double v = ml_asymptotic(p.alpha, x, p.tol);
        if (std::isfinite(v)) return v;
    }
    return ml_branch_cut(p.alpha, x, p.tol);
}

TimeSeries caputo_derivative_l1(const UniformSamples& samples, double alpha) {
    const auto& u = samples.values;
    if (u.size() < 3) fail(ErrorCode::Shape, "caputo_derivative_l1: need at least 3 samples");
    if (!(samples.step > 0.0)) fail(ErrorCode::Shape, "caputo_derivative_l1: step must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::Domain, "caputo_derivative_l1: alpha must lie in (0, 1)");

    const std::size_t n = u.size();
    std::vector<double> b(n);
    for (std::size_t j = 0; j < n; ++j)
        b[j] = std::pow(double(j + 1), 1.0 - alpha) - std::pow(double(j), 1.0 - alpha);
    const double scale = std::pow(samples.step, -alpha) / std::tgamma(2.0 - alpha);

    TimeSeries out;
    out.label = "caputo_l1";
    out.t_values.reserve(n - 1);
    out.values.reserve(n - 1);
    for (std::size_t m = 1; m < n; ++m) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += b[j] * (u[m - j] - u[m - j - 1]);
        out.t_values.push_back(m * samples.step);
        out.values.push_back(scale * acc);
    }
    return out;
}

}  // namespace subdiff
