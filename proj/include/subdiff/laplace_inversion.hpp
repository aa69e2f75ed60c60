#pragma once

// Numerical inversion of Laplace transforms.
//
// The primary method deforms the Bromwich line into the hyperbola
//   z(u) = mu (1 + sin(i u - a)),  u in R,
// and applies the trapezoidal rule in u. The transform must be analytic and bounded
// in the sector |arg z| < pi/2 + opening (singularities on the negative real axis are
// fine). Step size h and scale mu are chosen per node count by balancing the
// discretisation error exp(-2 pi d / h) against truncation and against the
// conditioning factor max|exp(z t)| on the contour.
//
// Gaver-Stehfest, which only samples the transform on the positive real axis, is
// kept as an independent cross-check.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace subdiff {

using cplx = std::complex<double>;

class HyperbolicInverter {
public:
    /// `opening` in (0, pi/2]: half-width of the admissible sector beyond the
    /// imaginary axis. `target` is the relative discretisation error aimed for;
    /// nodes are added (up to max_nodes) until the predicted error reaches it.
    explicit HyperbolicInverter(double opening = 1.5707963267948966, double target = 1e-13,
                                int min_nodes = 24, int max_nodes = 160);

    /// f(t) from its transform F evaluated on the contour.
    template <class F>
    double operator()(F&& transform, double t) const {
        double magnitude = 0.0;
        return evaluate(transform, t, magnitude);
    }

    /// As operator(), also returning the sum of |terms|; magnitude / |f(t)| is the
    /// cancellation factor of the contour sum.
    template <class F>
    double evaluate(F&& transform, double t, double& magnitude) const {
        const double inv_t = 1.0 / t;
        double term = 0.5 * (coeff_[0] * transform(node_[0] * inv_t)).imag();
        double acc = term;
        magnitude = std::abs(term);
        for (std::size_t k = 1; k < node_.size(); ++k) {
            term = (coeff_[k] * transform(node_[k] * inv_t)).imag();
            acc += term;
            magnitude += std::abs(term);
        }
        magnitude *= inv_t;
        return acc * inv_t;
    }

    int nodes() const noexcept { return static_cast<int>(node_.size()); }
    double predicted_error() const noexcept { return predicted_error_; }
    double opening() const noexcept { return opening_; }

    /// Same contour family with roughly two thirds of the nodes; the difference
    /// between the two results serves as an error estimate.
    HyperbolicInverter coarse() const;

private:
    HyperbolicInverter(double opening, int nodes);
    void build(int nodes);

    double opening_;
    double predicted_error_ = 1.0;
    std::vector<cplx> node_;   // z_k * t
    std::vector<cplx> coeff_;  // (h/pi) M exp(M zhat_k) zhat'_k
};

/// Trapezoid rule for the Bromwich integral on Re z = c when c is the real saddle of
/// z t + log F(z) with curvature `curvature` > 0 there, and F is analytic for
/// Re z > c - gap. Returns nullopt when the rule does not settle (slow decay or
/// oscillation dominated) or when |T(h) - T(h/2)| exceeds 1e-9 max(|T|, floor);
/// `error` is |T(h) - T(h/2)|.
std::optional<double> saddle_trapezoid(const std::function<cplx(cplx)>& transform, double t, double c,
                                       double curvature, double gap, double& error, double log_scale = 0.0,
                                       double floor = 0.0);

/// Bromwich integral along the vertical line Re z = c,
///   f(t) = e^(c t)/pi int_0^inf Re[e^(i y t) F(c + i y)] dy,
/// evaluated with Ooura's double-exponential rule for Fourier integrals. Slower than
/// the contour rule but never amplifies: |F(c + i y)| <= F(c) for transforms of
/// positive measures. `error` receives the rule's estimate. The result is multiplied
/// by exp(log_scale), letting callers pass a transform normalised at z = c.
double bromwich_line(const std::function<cplx(cplx)>& transform, double t, double c, double& error,
                     double log_scale = 0.0);

/// Gaver-Stehfest weights V_1..V_n (n even), in extended precision.
std::vector<long double> stehfest_weights(int n);

/// Gaver-Stehfest inversion using only real samples of the transform; the
/// weighted sum is accumulated in long double.
template <class F>
double gaver_stehfest(F&& transform, double t, int n = 16) {
    static thread_local int cached_n = 0;
    static thread_local std::vector<long double> weights;
    if (cached_n != n) {
        weights = stehfest_weights(n);
        cached_n = n;
    }
    const long double ln2 = 0.693147180559945309417232121458176568L;
    const long double a = ln2 / static_cast<long double>(t);
    long double acc = 0.0L;
    for (int k = 1; k <= n; ++k) acc += weights[k - 1] * static_cast<long double>(transform(a * k));
    return static_cast<double>(acc * a);
}

}  // namespace subdiff
