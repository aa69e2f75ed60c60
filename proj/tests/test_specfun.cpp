#include "subdiff/error.hpp"
#include "subdiff/specfun.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include <cmath>
#include <random>

using namespace subdiff;
using doctest::Approx;

namespace {

const double kPi = std::acos(-1.0);

// sum z^n / Gamma(1 + alpha n) in long double; cancellation-free only while the terms
// are not much larger than the sum (alpha >= 1/2 and |z| <= 2, or |z| < 1/2).
double ml_series(double alpha, double z) {
    long double acc = 0.0L;
    long double zn = 1.0L;
    for (int n = 0; n < 200; ++n) {
        acc += zn / std::tgamma(1.0L + alpha * n);
        zn *= z;
    }
    return static_cast<double>(acc);
}

}  // namespace

TEST_CASE("gamma at half-integers") {
    CHECK(gamma_fn(1.0) == Approx(1.0).epsilon(1e-15));
    CHECK(gamma_fn(0.5) == Approx(std::sqrt(kPi)).epsilon(1e-14));
    CHECK(gamma_fn(1.5) == Approx(0.5 * std::sqrt(kPi)).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == Approx(1.7724538509).epsilon(1e-10));
}

TEST_CASE("gamma recurrence on random arguments") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1e-3, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        CHECK(gamma_fn(x + 1.0) == Approx(x * gamma_fn(x)).epsilon(1e-10));
    }
}

TEST_CASE("rgamma vanishes at the poles") {
    CHECK(rgamma(0.0) == 0.0);
    CHECK(rgamma(-2.0) == 0.0);
    CHECK(rgamma(3.0) == Approx(0.5));
}

TEST_CASE("upper incomplete gamma") {
    CHECK(upper_incomplete_gamma(1.0, 1.0) == Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(upper_incomplete_gamma(0.0, 1.0) == Approx(boost::math::expint(1, 1.0)).epsilon(1e-12));
    CHECK(upper_incomplete_gamma(0.0, 1.0) == Approx(0.2193839344).epsilon(1e-9));
    CHECK(upper_incomplete_gamma(0.5, 0.25) == Approx(std::sqrt(kPi) * std::erfc(0.5)).epsilon(1e-12));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> nu(0.05, 6.0);
    std::uniform_real_distribution<double> x(0.01, 30.0);
    for (int i = 0; i < 100; ++i) {
        const double a = nu(rng);
        const double b = x(rng);
        CHECK(upper_incomplete_gamma(a, b) == Approx(boost::math::tgamma(a, b)).epsilon(1e-11));
    }
}

TEST_CASE("upper incomplete gamma with negative order matches the recurrence") {
    // Gamma(nu + 1, x) = nu Gamma(nu, x) + x^nu e^-x
    for (double nu : {-0.3, -0.5, -0.7}) {
        for (double x : {0.1, 1.0, 5.0}) {
            const double lhs = upper_incomplete_gamma(nu + 1.0, x);
            const double rhs = nu * upper_incomplete_gamma(nu, x) + std::pow(x, nu) * std::exp(-x);
            CHECK(lhs == Approx(rhs).epsilon(1e-11));
        }
    }
}

TEST_CASE("erf against its Maclaurin series") {
    double series = 0.0;
    double fact = 1.0;
    for (int n = 0; n < 40; ++n) {
        if (n > 0) fact *= n;
        series += (n % 2 ? -1.0 : 1.0) / (fact * (2 * n + 1));
    }
    series *= 2.0 / std::sqrt(kPi);
    CHECK(erf_fn(0.0) == 0.0);
    CHECK(erf_fn(1.0) == Approx(series).epsilon(1e-14));
    CHECK(erf_fn(1.0) == Approx(0.8427007929).epsilon(1e-10));
    CHECK(erf_fn(-1.0) == -erf_fn(1.0));
}

TEST_CASE("Mittag-Leffler closed forms") {
    CHECK(mittag_leffler(1.0, -1.0) == Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(mittag_leffler(0.5, -1.0) == Approx(std::exp(1.0) * std::erfc(1.0)).epsilon(1e-12));
    CHECK(mittag_leffler(0.7, 0.0) == 1.0);
    for (double z : {-0.1, -2.0, -7.5, -30.0})
        CHECK(mittag_leffler(0.5, z) ==
              Approx(static_cast<double>(std::exp(static_cast<long double>(z) * z) * std::erfc(static_cast<long double>(-z))))
                  .epsilon(1e-10));
}

TEST_CASE("Mittag-Leffler against the power series") {
    for (double alpha : {0.5, 0.8, 0.95})
        for (double z : {-0.3, -1.0, -2.0})
            CHECK(mittag_leffler(alpha, z) == Approx(ml_series(alpha, z)).epsilon(1e-10));
    for (double alpha : {0.1, 0.2})
        for (double z : {-0.1, -0.45})
            CHECK(mittag_leffler(alpha, z) == Approx(ml_series(alpha, z)).epsilon(1e-10));
}

TEST_CASE("E_1 is the exponential on [-50, 0]") {
    for (int i = 0; i <= 500; ++i) {
        const double z = -0.1 * i;
        CHECK(mittag_leffler(1.0, z) == Approx(std::exp(z)).epsilon(1e-10));
    }
}

TEST_CASE("E_alpha(-x) is positive and non-increasing") {
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        CHECK(mittag_leffler(alpha, 0.0) == 1.0);
        double prev = 1.0;
        for (double x = 1e-3; x <= 1e6; x *= 1.2) {
            const double v = mittag_leffler(alpha, -x);
            CHECK(v > 0.0);
            CHECK(v <= prev * (1.0 + 1e-12));
            prev = v;
        }
    }
}

TEST_CASE("E_alpha(-x) ~ 1 / (x Gamma(1 - alpha))") {
    for (double alpha : {0.3, 0.5, 0.8}) {
        CHECK(1e4 * std::tgamma(1.0 - alpha) * mittag_leffler(alpha, -1e4) == Approx(1.0).epsilon(0.05));
        CHECK(1e6 * std::tgamma(1.0 - alpha) * mittag_leffler(alpha, -1e6) == Approx(1.0).epsilon(0.005));
    }
}

TEST_CASE("Mittag-Leffler rejects bad arguments") {
    CHECK_THROWS_AS(mittag_leffler(0.0, -1.0), Error);
    CHECK_THROWS_AS(mittag_leffler(1.5, -1.0), Error);
    CHECK_THROWS_AS(mittag_leffler(0.5, 1.0), Error);
}

TEST_CASE("L1 Caputo derivative") {
    UniformSamples c{0.01, std::vector<double>(50, 3.0)};
    for (double v : caputo_derivative_l1(c, 0.5).values) CHECK(v == 0.0);

    // The scheme is exact on piecewise-linear data.
    UniformSamples lin{0.01, {}};
    for (int j = 0; j <= 100; ++j) lin.values.push_back(0.01 * j);
    const TimeSeries d = caputo_derivative_l1(lin, 0.5);
    for (std::size_t k = 0; k < d.size(); ++k)
        CHECK(d.values[k] == Approx(2.0 * std::sqrt(d.t_values[k] / kPi)).epsilon(1e-12));

    CHECK_THROWS_AS(caputo_derivative_l1(UniformSamples{0.1, {1.0, 2.0}}, 0.5), Error);
}

TEST_CASE("L1 Caputo derivative of the relaxation mode converges with order >= 1") {
    const double alpha = 0.5;
    const double lambda = 2.0;
    const double exact = -lambda * mittag_leffler(alpha, -lambda);
    std::vector<double> errs;
    for (std::size_t n : {64u, 128u, 256u, 512u}) {
        UniformSamples u{1.0 / static_cast<double>(n), {}};
        for (std::size_t j = 0; j <= n; ++j)
            u.values.push_back(mittag_leffler(alpha, -lambda * std::pow(u.step * static_cast<double>(j), alpha)));
        const TimeSeries d = caputo_derivative_l1(u, alpha);
        errs.push_back(std::abs(d.values.back() - exact));
    }
    CHECK(errs.back() < 1e-3);
    for (std::size_t i = 1; i < errs.size(); ++i) CHECK(std::log2(errs[i - 1] / errs[i]) >= 1.0);
}
