#pragma once

// Scalar special functions: gamma, incomplete gamma, erf, the one-parameter
// Mittag-Leffler function on the negative real axis, and the L1 discretisation
// of the Caputo derivative.

#include "subdiff/series.hpp"

namespace subdiff {

double gamma_fn(double x);

/// 1/Gamma(x) for every real x (zero at the poles).
double rgamma(double x) noexcept;

/// Upper incomplete gamma Gamma(nu, x) = int_x^inf t^(nu-1) e^-t dt, any real nu, x > 0.
double upper_incomplete_gamma(double nu, double x);

double erf_fn(double x) noexcept;

inline constexpr double kDefaultMLTolerance = 1e-10;

struct MLParams {
    double alpha = 1.0;  ///< order in (0, 1]
    double z = 0.0;      ///< argument, z <= 0
    double tol = kDefaultMLTolerance;
};

/// E_alpha(z) = sum_n z^n / Gamma(1 + alpha n) for z <= 0.
///
/// Three regimes: the power series for |z| <= 1/2, the algebraic asymptotic
/// expansion -sum_k z^-k / Gamma(1 - alpha k) for |z| >= 50, and in between the
/// branch-cut form of the inverse Laplace transform of s^(alpha-1)/(s^alpha + 1),
///
///   E_alpha(-x) = sin(pi alpha)/(pi alpha) int_0^inf exp(-(x s)^(1/alpha)) / (s^2 + 2 s cos(pi alpha) + 1) ds,
///
/// which has a positive integrand and therefore no cancellation.
double mittag_leffler(const MLParams& p);

inline double mittag_leffler(double alpha, double z) { return mittag_leffler(MLParams{alpha, z}); }

/// L1 scheme for the Caputo derivative of order alpha in (0, 1):
///   D u(t_n) ~ h^-alpha / Gamma(2 - alpha) * sum_{j<n} b_j (u_{n-j} - u_{n-j-1}),
///   b_j = (j + 1)^(1-alpha) - j^(1-alpha).
/// Returns the derivative at t_1 .. t_{n-1}. Needs at least 3 samples.
TimeSeries caputo_derivative_l1(const UniformSamples& samples, double alpha);

}  // namespace subdiff
