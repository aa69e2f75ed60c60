#include "subdiff/invsub.hpp"

#include "subdiff/error.hpp"
#include "subdiff/parallel.hpp"
#include "subdiff/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace subdiff {

namespace {

void check_args(double t, double tau, const char* what) {
    if (!(t > 0.0)) fail(ErrorCode::Domain, std::string(what) + ": t must be positive");
    if (!(tau >= 0.0)) fail(ErrorCode::Domain, std::string(what) + ": tau must be non-negative");
}

const KernelSpec& require_invertible(const KernelSpec& spec) {
    if (!supports_inversion(spec))
        fail(ErrorCode::Unsupported, "kernel " + spec.class_label() +
                                         " is an asymptotic template only; its density cannot be inverted");
    return spec;
}

// Relative floor for quadrature cut-offs.
constexpr double kTailEps = 1e-12;

}  // namespace

DensityEvaluator::DensityEvaluator(KernelSpec spec, double target)
    : spec_(require_invertible(spec)),
      fine_(analytic_opening(spec_), target),
      coarse_(fine_.coarse()) {}

cplx DensityEvaluator::transform(cplx z, double tau, bool cesaro) const {
    const cplx K = laplace_K(spec_, z);
    const cplx v = K * std::exp(-tau * z * K);
    return cesaro ? v / z : v;
}

double DensityEvaluator::dphi(double lambda) const {
    // complex-step derivative of the real-analytic exponent
    const double h = 1e-30 * std::max(1.0, std::abs(lambda));
    return laplace_exponent(spec_, cplx(lambda, h)).imag() / h;
}

double DensityEvaluator::saddle(double t, double tau, bool cesaro) const {
    // Minimiser of lambda t - tau Phi(lambda) on (abscissa, inf): t = tau Phi'(lambda).
    const double base = cesaro ? std::max(0.0, laplace_abscissa(spec_)) : laplace_abscissa(spec_);
    const double margin = base < 0.0 ? -0.5 * base : 1.0 / t;
    const double floor = base + margin;
    if (tau == 0.0) return std::max(floor, 1.0 / t);
    auto dphi = [&](double lambda) { return this->dphi(lambda); };
    if (tau * dphi(floor) <= t) return floor;
    double lo = floor;
    double hi = std::max(2.0 * std::abs(floor), 1.0 / t);
    while (tau * dphi(hi) > t) {
        lo = hi;
        hi *= 4.0;
        if (hi > 1e300) return lo;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-14 * std::abs(hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (tau * dphi(mid) > t ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Estimate DensityEvaluator::invert(double t, double tau, bool cesaro) const {
    // Chernoff: beyond tau Phi(1/t) = 800 both G_t(tau) and its Cesaro mean underflow.
    if (tau * laplace_exponent(spec_, 1.0 / t) > 800.0) return {0.0, 0.0};
    auto F = [&](cplx z) { return transform(z, tau, cesaro); };
    const double fine = fine_(F, t);
    const double err = std::abs(fine - coarse_(F, t));
    // Densities in tau have scale ~ Phi(1/t) ~ 1 / E[E_t]; the Cesaro transform carries an extra t.
    const double scale = laplace_exponent(spec_, 1.0 / t) * (cesaro ? t : 1.0);
    if (std::isfinite(fine) && err <= kAgreement * std::max(std::abs(fine), scale)) return {fine, err};
    // The contour is not resolved (large tau / t for finite-mean kernels): switch to the
    // vertical line through the saddle, where the integrand never exceeds its crossing value.
    const double c = saddle(t, tau, cesaro);
    const double shift = tau * laplace_exponent(spec_, cplx(c, 0.0)).real();
    auto normalised = [&](cplx z) {
        const cplx K = laplace_K(spec_, z);
        const cplx v = K * std::exp(shift - tau * z * K);
        return cesaro ? v / z : v;
    };
    double line_err = 0.0;
    const double a0 = laplace_abscissa(spec_);
    if (cesaro && a0 < 0.0) {
        // K is analytic across 0, so the pole of the Cesaro transform can be crossed. When it
        // sits inside the saddle peak, move the line to its left and add the residue K(0).
        const double cs = saddle(t, tau, false);
        const double ds = 1e-4 * std::max(std::abs(cs), 1.0 / t);
        const double width = 1.0 / std::sqrt(-tau * (dphi(cs + ds) - dphi(cs - ds)) / (2.0 * ds));
        const double cl = std::min(cs, -1.5 * width);
        if (tau > 0.0 && cs < 1.5 * width && cl > a0) {
            const double sl = tau * laplace_exponent(spec_, cplx(cl, 0.0)).real();
            auto left = [&](cplx z) {
                return laplace_K(spec_, z) * std::exp(sl - tau * laplace_exponent(spec_, z)) / z;
            };
            const double dl = 1e-4 * std::max(std::abs(cl), 1.0 / t);
            const double curv = -tau * (dphi(cl + dl) - dphi(cl - dl)) / (2.0 * dl);
            const double residue = dphi(0.0);  // Phi(0) = 0, K(0) = Phi'(0)
            if (auto v = saddle_trapezoid(left, t, cl, curv, std::min(cl - a0, -cl), line_err, -sl, scale))
                return {residue + *v, line_err};
        }
    }
    const double base = cesaro ? std::max(0.0, a0) : a0;
    const double d = 1e-4 * std::max(std::abs(c), 1.0 / t);
    const double curvature = -tau * (dphi(c + d) - dphi(c - d)) / (2.0 * d);
    if (auto v = saddle_trapezoid(normalised, t, c, curvature, c - base, line_err, -shift, scale))
        return {*v, line_err};
    const double value = bromwich_line(normalised, t, c, line_err, -shift);
    return {value, line_err};
}

double DensityEvaluator::density(double t, double tau) const {
    check_args(t, tau, "density_G");
    return invert(t, tau, false).value;
}

double DensityEvaluator::cesaro(double t, double tau) const {
    check_args(t, tau, "cesaro_density");
    return invert(t, tau, true).value / t;
}

Estimate DensityEvaluator::density_with_error(double t, double tau) const {
    check_args(t, tau, "density_G");
    return invert(t, tau, false);
}

Estimate DensityEvaluator::cesaro_with_error(double t, double tau) const {
    check_args(t, tau, "cesaro_density");
    Estimate e = invert(t, tau, true);
    return {e.value / t, e.error / t};
}

double DensityEvaluator::density_stehfest(double t, double tau, int n) const {
    check_args(t, tau, "density_G");
    const long double ltau = tau;
    auto F = [&](long double lambda) {
        const long double K = laplace_K(spec_, lambda);
        return K * std::exp(-ltau * lambda * K);
    };
    return gaver_stehfest(F, t, n);
}

double DensityEvaluator::tau_max(double t, double eps) const {
    const double phi = laplace_exponent(spec_, 1.0 / t);
    return (1.0 - std::log(eps)) / phi;
}

double DensityEvaluator::tail_bound(double t, double tau) const {
    const double phi = laplace_exponent(spec_, 1.0 / t);
    return std::min(1.0, std::exp(1.0 - tau * phi));
}

double density_G(const KernelSpec& spec, double t, double tau) { return DensityEvaluator(spec).density(t, tau); }

double cesaro_density(const KernelSpec& spec, double t, double tau) {
    return DensityEvaluator(spec).cesaro(t, tau);
}

TauRule tau_rule(const DensityEvaluator& ev, double t) {
    if (!(t > 0.0)) fail(ErrorCode::Domain, "tau_rule: t must be positive");
    const KernelSpec& spec = ev.kernel();
    const double top = ev.tau_max(t, kTailEps);
    const double lo = top * 1e-12;
    TauRule out{{}, lo, top};

    auto append = [&](const quad::Rule& r) {
        out.rule.nodes.insert(out.rule.nodes.end(), r.nodes.begin(), r.nodes.end());
        out.rule.weights.insert(out.rule.weights.end(), r.weights.begin(), r.weights.end());
    };
    // Renewal approximation of E_t: mean t / Phi', spread sqrt(t |Phi''|) / Phi'^(3/2), at lambda = 1/t.
    const double xi = 1.0 / t;
    const double h = 1e-4 * xi;
    const double d1 = (laplace_exponent(spec, xi + h) - laplace_exponent(spec, xi - h)) / (2 * h);
    const double d2 = (laplace_exponent(spec, xi + h) - 2 * laplace_exponent(spec, xi) +
                       laplace_exponent(spec, xi - h)) / (h * h);
    const double mean = t / d1;
    const double spread = std::sqrt(t * std::abs(d2)) / std::pow(d1, 1.5);
    const double a = mean - 12.0 * spread;
    const double b = mean + 12.0 * spread;
    if (!(spread < 0.25 * mean) || !(a > lo) || !(b < top)) {
        append(quad::log_gauss(lo, top, 0.25));
        return out;
    }
    append(quad::log_gauss(lo, a, 0.25));
    append(quad::composite_gauss(a, b, 48));
    append(quad::log_gauss(b, top, 0.25));
    return out;
}

MassCheck density_mass(const DensityEvaluator& ev, double t) {
    const TauRule tr = tau_rule(ev, t);
    const quad::Rule& rule = tr.rule;
    std::vector<double> g(rule.size());
    parallel_for(rule.size(), [&](std::size_t i) { g[i] = ev.density(t, rule.nodes[i]); });
    double mass = ev.density(t, 0.0) * tr.lo;
    for (std::size_t i = 0; i < rule.size(); ++i) mass += rule.weights[i] * g[i];
    return {mass, ev.tail_bound(t, tr.hi), tr.hi};
}

double mean_inverse_subordinator(const DensityEvaluator& ev, double t) {
    if (!(t > 0.0)) fail(ErrorCode::Domain, "mean_inverse_subordinator: t must be positive");
    const double phi = laplace_exponent(ev.kernel(), 1.0 / t);
    const TauRule tr = tau_rule(ev, t);
    const quad::Rule& rule = tr.rule;
    const double top = tr.hi;
    std::vector<double> g(rule.size());
    parallel_for(rule.size(), [&](std::size_t i) { g[i] = ev.density(t, rule.nodes[i]); });
    double mean = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) mean += rule.weights[i] * rule.nodes[i] * g[i];
    // int_top^inf tau G dtau = top P(E > top) + int_top^inf P(E > tau) dtau
    const double tail = ev.tail_bound(t, top) * (top + 1.0 / phi);
    if (!(tail <= 1e-6 * mean))
        fail(ErrorCode::Accuracy, "mean_inverse_subordinator: tail not controlled", mean);
    return mean;
}

double mean_inverse_subordinator(const KernelSpec& spec, double t) {
    return mean_inverse_subordinator(DensityEvaluator(spec), t);
}

DensityGrid fill_density_grid(const DensityEvaluator& ev, std::vector<double> t_values,
                              std::vector<double> tau_values, const GridOptions& opts) {
    for (double t : t_values)
        if (!(t > 0.0)) fail(ErrorCode::Domain, "density grid: t values must be positive");
    for (double tau : tau_values)
        if (!(tau >= 0.0)) fail(ErrorCode::Domain, "density grid: tau values must be non-negative");
    if (!std::is_sorted(t_values.begin(), t_values.end()) || !std::is_sorted(tau_values.begin(), tau_values.end()))
        fail(ErrorCode::Shape, "density grid: t and tau values must be sorted");

    DensityGrid grid{ev.kernel(), std::move(t_values), std::move(tau_values), {}, {}, {}, {}, 0.0};
    const std::size_t nt = grid.t_values.size();
    const std::size_t ntau = grid.tau_values.size();
    grid.values.assign(nt * ntau, 0.0);
    grid.err_est.assign(nt * ntau, 0.0);
    grid.clamped.assign(nt * ntau, 0);
    grid.flagged.assign(nt * ntau, 0);
    std::vector<double> raw(nt * ntau);

    parallel_for(nt * ntau, [&](std::size_t k) {
        const double t = grid.t_values[k / ntau];
        const double tau = grid.tau_values[k % ntau];
        const Estimate e = ev.density_with_error(t, tau);
        raw[k] = e.value;
        grid.err_est[k] = e.error;
        if (opts.cross_check) {
            const double gs = ev.density_stehfest(t, tau);
            const double scale = std::max(std::abs(e.value), 1e-300);
            if (std::abs(gs - e.value) > opts.cross_check_tol * scale) grid.flagged[k] = 1;
        }
    });

    grid.min_raw = raw.empty() ? 0.0 : *std::min_element(raw.begin(), raw.end());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        if (raw[k] < 0.0) {
            grid.values[k] = 0.0;
            grid.clamped[k] = 1;
            grid.err_est[k] = std::max(grid.err_est[k], -raw[k]);
        } else {
            grid.values[k] = raw[k];
        }
    }
    return grid;
}

void write_csv(const DensityGrid& grid, std::ostream& os) {
    os << "t,tau,G,err\n";
    os << std::setprecision(17);
    const std::size_t ntau = grid.tau_values.size();
    for (std::size_t i = 0; i < grid.t_values.size(); ++i)
        for (std::size_t j = 0; j < ntau; ++j)
            os << grid.t_values[i] << ',' << grid.tau_values[j] << ',' << grid.values[i * ntau + j] << ','
               << grid.err_est[i * ntau + j] << '\n';
}

}  // namespace subdiff
