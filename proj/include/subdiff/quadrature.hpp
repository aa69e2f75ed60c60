#pragma once

// Quadrature plumbing shared by the numerical modules. Adaptive rules come from
// Boost.Math; the fixed composite rules are built here so that node sets can be
// reused across many integrands (e.g. one tau grid for a whole time series).

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <vector>

namespace subdiff::quad {

/// Nodes and weights of a fixed rule; sum(w[i] * f(x[i])) approximates the integral.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }

    template <class F>
    double apply(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

/// Composite 8-point Gauss-Legendre rule with `panels` equal panels on [a, b].
Rule composite_gauss(double a, double b, int panels);

/// Composite Gauss-Legendre in u = ln(x) on [lo, hi] (lo > 0); panels of at most
/// `log_width` in u. Weights include the Jacobian x, so the rule integrates f(x) dx.
Rule log_gauss(double lo, double hi, double log_width = 0.25);

/// Gauss-Legendre rule with n points on [-1, 1] (n in {8, 16, 32, 64}).
Rule gauss_legendre(int n);

struct Result {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive 31-point Gauss-Kronrod on a finite or semi-infinite interval.
template <class F>
Result adaptive(F&& f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 18) {
    double err = 0.0;
    double l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, max_depth, rel_tol, &err, &l1);
    return {v, err};
}

}  // namespace subdiff::quad
