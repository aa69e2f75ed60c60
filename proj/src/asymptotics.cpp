#include "subdiff/asymptotics.hpp"

#include "subdiff/error.hpp"
#include "subdiff/parallel.hpp"
#include "subdiff/quadrature.hpp"
#include "subdiff/specfun.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

namespace subdiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCut = 41.0;  // e^-41 < 1e-17

// Tabulation range of VProfile::from_spec in ln(tau).
constexpr double kTabLo = 1e-6;
constexpr double kTabStep = 0.025;
constexpr double kTabMin = 1e4;
constexpr double kTabMax = 1e12;

// Lower end of the ln(s) quadrature of the direct Cesaro route, relative to t.
constexpr double kDirectLo = 1e-7;

void require_time(double t, const char* what) {
    if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::Domain, std::string(what) + ": t must be positive");
}

// int_a^b f: Gauss-Kronrod in tau up to 1e-3, decades in ln(tau) after that.
template <class F>
double integrate_log(F&& f, double a, double b) {
    constexpr double kFirst = 1e-3;
    double acc = 0.0;
    double lo = a;
    if (lo < kFirst) {
        const double hi = std::min(b, kFirst);
        acc += quad::adaptive(f, lo, hi, 1e-11, 12).value;
        lo = hi;
    }
    auto g = [&](double u) {
        const double tau = std::exp(u);
        return f(tau) * tau;
    };
    while (lo < b) {
        const double hi = std::min(b, 10.0 * lo);
        acc += quad::adaptive(g, std::log(lo), std::log(hi), 1e-11, 12).value;
        lo = hi;
    }
    return acc;
}

struct Table {
    double u0 = 0.0;
    double v_lo = 0.0;
    double tau_hi = 0.0;
    double v_hi = 0.0;
    double p = 0.0;
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline;

    double operator()(double tau) const {
        if (tau <= kTabLo) return v_lo;
        if (tau >= tau_hi) return v_hi * std::pow(tau_hi / tau, p);
        return spline(std::log(tau));
    }
};

// int v G_t dtau (or against the Cesaro mean of G) on the tau rule at time t.
double pair_with_density(const VProfile& v, const DensityEvaluator& ev, double t, bool cesaro) {
    const TauRule tr = tau_rule(ev, t);
    const quad::Rule& rule = tr.rule;
    double acc = v(0.5 * tr.lo) * (cesaro ? ev.cesaro(t, 0.0) : ev.density(t, 0.0)) * tr.lo;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double tau = rule.nodes[i];
        acc += rule.weights[i] * v(tau) * (cesaro ? ev.cesaro(t, tau) : ev.density(t, tau));
    }
    return acc;
}

void check_integrable(const ProblemSpec& spec, const KernelSpec& kernel, const char* what) {
    const auto* ig = std::get_if<kernel::InverseGamma>(&kernel.variant());
    if (!spec.integrable() && !(ig && ig->a > 0.0))
        fail(ErrorCode::Divergence, std::string(what) + ": decay exponent " + std::to_string(spec.decay_exponent()) +
                                        " <= 1, v(x, .) is not integrable");
}

}  // namespace

VProfile VProfile::from_function(std::function<double(double)> v, double tail_exponent, std::string label) {
    if (!v) fail(ErrorCode::Domain, "VProfile: empty function");
    return VProfile(std::move(v), tail_exponent, std::move(label));
}

VProfile VProfile::from_table(std::vector<double> tau, std::vector<double> values, double tail_exponent,
                              std::string label) {
    if (tau.size() != values.size() || tau.size() < 2)
        fail(ErrorCode::Shape, "VProfile: table needs at least two (tau, v) pairs of equal length");
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (!(tau[i] > 0.0) || (i > 0 && !(tau[i] > tau[i - 1])))
            fail(ErrorCode::Shape, "VProfile: tau must be positive and strictly increasing");
        if (!std::isfinite(values[i])) fail(ErrorCode::Shape, "VProfile: non-finite value");
    }
    auto f = [tau = std::move(tau), values = std::move(values), p = tail_exponent](double s) {
        if (s <= tau.front()) return values.front();
        if (s >= tau.back()) return values.back() * std::pow(tau.back() / s, p);
        const auto it = std::upper_bound(tau.begin(), tau.end(), s);
        const std::size_t j = static_cast<std::size_t>(it - tau.begin());
        const double w = std::log(s / tau[j - 1]) / std::log(tau[j] / tau[j - 1]);
        return values[j - 1] + w * (values[j] - values[j - 1]);
    };
    return VProfile(std::move(f), tail_exponent, std::move(label));
}

VProfile VProfile::from_spec(const ProblemSpec& spec, double x) {
    spec.validate();
    const double p = spec.decay_exponent();
    const double u0 = std::log(kTabLo);
    const int per_decade = static_cast<int>(std::lround(std::log(10.0) / kTabStep));
    const double step = std::log(10.0) / per_decade;
    std::vector<double> vals;
    auto extend = [&](int decades) {
        const std::size_t first = vals.size();
        vals.resize(first + static_cast<std::size_t>(decades * per_decade));
        parallel_for(vals.size() - first, [&](std::size_t i) {
            vals[first + i] = solution_v(spec, x, std::exp(u0 + step * static_cast<double>(first + i)));
        });
    };
    // up to kTabMin, then decade by decade until the log-slope settles at -p
    extend(static_cast<int>(std::lround(std::log10(kTabMin / kTabLo))) + 1);
    double tau_hi = kTabLo * std::pow(10.0, static_cast<double>(vals.size() - 1) / per_decade);
    for (;;) {
        const std::size_t n = vals.size();
        const double a = vals[n - 1 - static_cast<std::size_t>(per_decade)];
        const double b = vals[n - 1];
        const double slope = (a > 0.0 && b > 0.0) ? std::log(b / a) / std::log(10.0) : kInf;
        if (std::abs(slope + p) < 1e-5 * std::max(p, 1.0) || tau_hi >= kTabMax) break;
        extend(1);
        tau_hi *= 10.0;
    }
    auto table = std::make_shared<Table>();
    table->u0 = u0;
    table->v_lo = vals.front();
    table->v_hi = vals.back();
    table->tau_hi = std::exp(u0 + step * static_cast<double>(vals.size() - 1));
    table->p = p;
    table->spline =
        boost::math::interpolators::cardinal_cubic_b_spline<double>(vals.begin(), vals.end(), u0, step);
    std::ostringstream label;
    label << "solution_v(x=" << x << ")";
    return VProfile([table](double tau) { return (*table)(tau); }, p, label.str());
}

double VProfile::laplace(double ell) const {
    if (!(ell >= 0.0) || !std::isfinite(ell)) fail(ErrorCode::Domain, "VProfile::laplace: ell must be >= 0");
    if (ell == 0.0 && !(p_ > 1.0))
        fail(ErrorCode::Divergence, "VProfile::laplace: v is not integrable (tail exponent <= 1)");
    auto f = [&](double tau) { return std::exp(-ell * tau) * v_(tau); };
    const double limit = ell > 0.0 ? kCut / ell : kInf;
    constexpr double kMaxHorizon = 1e15;
    double hi = std::min(limit, 1e2);
    double acc = integrate_log(f, 0.0, hi);
    auto tail = [&](double h) {
        // int_h^inf e^(-ell tau) v(h) (h / tau)^p dtau
        const double vh = v_(h);
        if (vh == 0.0 || !std::isfinite(p_)) return 0.0;
        if (ell == 0.0) return vh * h / (p_ - 1.0);
        return vh * std::pow(h, p_) * std::pow(ell, p_ - 1.0) * upper_incomplete_gamma(1.0 - p_, ell * h);
    };
    while (hi < limit && hi < kMaxHorizon) {
        if (std::abs(tail(hi)) < 1e-12 * std::abs(acc)) break;
        const double next = std::min(limit, 10.0 * hi);
        acc += integrate_log(f, hi, next);
        hi = next;
    }
    if (hi >= limit) return acc;
    return acc + tail(hi);
}

double subordinated_solution(const VProfile& v, const DensityEvaluator& ev, double t) {
    require_time(t, "subordinated_solution");
    return pair_with_density(v, ev, t, false);
}

double subordinated_solution(const ProblemSpec& spec, const KernelSpec& kernel, double x, double t) {
    spec.validate();
    check_integrable(spec, kernel, "subordinated_solution");
    return subordinated_solution(VProfile::from_spec(spec, x), DensityEvaluator(kernel), t);
}

double cesaro_direct(const VProfile& v, const DensityEvaluator& ev, double t) {
    require_time(t, "cesaro_direct");
    const double lo = kDirectLo * t;
    const quad::Rule rule = quad::log_gauss(lo, t, 1.0);
    std::vector<double> ve(rule.size());
    parallel_for(rule.size(), [&](std::size_t i) { ve[i] = subordinated_solution(v, ev, rule.nodes[i]); });
    double acc = lo * subordinated_solution(v, ev, 0.5 * lo);
    for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights[i] * ve[i];
    return acc / t;
}

CesaroSeries cesaro_mean_vE(const VProfile& v, const DensityEvaluator& ev, const std::vector<double>& t_grid,
                            const CesaroOptions& opts) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        require_time(t_grid[i], "cesaro_mean_vE");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) fail(ErrorCode::Shape, "cesaro_mean_vE: t grid must increase");
    }
    CesaroSeries out;
    out.mean.label = "cesaro_mean_vE";
    out.mean.t_values = t_grid;
    out.mean.values.assign(t_grid.size(), 0.0);
    parallel_for(t_grid.size(), [&](std::size_t i) { out.mean.values[i] = pair_with_density(v, ev, t_grid[i], true); });
    if (!opts.alt_route || t_grid.empty()) return out;

    // Running integral of v^E: ln(s) Gauss panels from kDirectLo t_0 to t_0, then one
    // panel set per grid interval.
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<std::size_t> ends;
    const double lo = kDirectLo * t_grid.front();
    double prev = lo;
    for (double t : t_grid) {
        const quad::Rule r = quad::log_gauss(prev, t, 1.0);
        nodes.insert(nodes.end(), r.nodes.begin(), r.nodes.end());
        weights.insert(weights.end(), r.weights.begin(), r.weights.end());
        ends.push_back(nodes.size());
        prev = t;
    }
    std::vector<double> ve(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) { ve[i] = subordinated_solution(v, ev, nodes[i]); });
    double running = lo * subordinated_solution(v, ev, 0.5 * lo);
    std::size_t k = 0;
    out.alt.resize(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        for (; k < ends[i]; ++k) running += weights[k] * ve[k];
        out.alt[i] = running / t_grid[i];
        const double ref = std::abs(out.mean.values[i]);
        const double d = std::abs(out.alt[i] - out.mean.values[i]) / (ref > 0.0 ? ref : 1.0);
        out.max_discrepancy = std::max(out.max_discrepancy, d);
    }
    if (out.max_discrepancy > opts.warn_discrepancy) {
        std::ostringstream msg;
        msg << "consistency warning: tau-integral and time-average routes differ by "
            << out.max_discrepancy * 100.0 << "%";
        out.warning = msg.str();
    }
    return out;
}

CesaroSeries cesaro_mean_vE(const ProblemSpec& spec, const KernelSpec& kernel, double x,
                            const std::vector<double>& t_grid, const CesaroOptions& opts) {
    spec.validate();
    check_integrable(spec, kernel, "cesaro_mean_vE");
    return cesaro_mean_vE(VProfile::from_spec(spec, x), DensityEvaluator(kernel), t_grid, opts);
}

double laplace_side_w(const VProfile& v, const KernelSpec& kernel, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) fail(ErrorCode::Domain, "laplace_side_w: lambda must be positive");
    return v.laplace(laplace_exponent(kernel, lambda));
}

double laplace_side_w(const ProblemSpec& spec, const KernelSpec& kernel, double x, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) fail(ErrorCode::Domain, "laplace_side_w: lambda must be positive");
    return weighted_l1_norm(spec, x, laplace_exponent(kernel, lambda));
}

double generic_asymptote(const KernelSpec& kernel, double norm, double t) {
    const RegularVariationData rv = regular_variation_data(kernel);
    return norm * laplace_K(kernel, 1.0 / t) / t / std::tgamma(rv.rho + 1.0);
}

double predicted_asymptote(const KernelSpec& kernel, double norm, double t) {
    if (!(t > 1.0)) fail(ErrorCode::Domain, "predicted_asymptote: t must exceed 1");
    if (const auto* k = std::get_if<kernel::Stable>(&kernel.variant()))
        return norm * std::pow(t, -k->theta) / std::tgamma(2.0 - k->theta);
    if (const auto* k = std::get_if<kernel::DistributedOrderAsymptotic>(&kernel.variant()))
        return k->C * norm * std::pow(std::log(t), -k->kappa);
    if (const auto* k = std::get_if<kernel::InverseGamma>(&kernel.variant()); k && k->a > 0.0)
        return 2.0 * std::sqrt(k->a * k->b) * norm;
    if (const auto* k = std::get_if<kernel::Gamma>(&kernel.variant())) return k->a * norm / (k->b * t);
    if (const auto* k = std::get_if<kernel::TemperedStable>(&kernel.variant()))
        return k->theta * std::pow(k->beta, k->theta - 1.0) * norm / t;
    return generic_asymptote(kernel, norm, t);
}

std::pair<double, double> default_fit_window(const TimeSeries& series) {
    if (series.size() < 2) fail(ErrorCode::Shape, "fit window: series has fewer than two points");
    const double hi = series.t_values.back();
    return {std::max(series.t_values.front(), hi * std::pow(10.0, -1.5)), hi};
}

AsymptoticFitReport fit_regular_variation(const TimeSeries& series, std::pair<double, double> window,
                                          const KernelSpec* kernel, std::optional<double> norm) {
    validate(series);
    const auto [t_lo, t_hi] = window;
    if (!(t_lo > 0.0) || !(t_lo < t_hi)) fail(ErrorCode::Shape, "fit_regular_variation: need 0 < t_lo < t_hi");
    std::function<double(double)> L = [](double) { return 1.0; };
    double rho = std::numeric_limits<double>::quiet_NaN();
    if (kernel) {
        RegularVariationData rv = regular_variation_data(*kernel);
        L = std::move(rv.L);
        rho = rv.rho;
    }
    constexpr double kEdge = 1e-12;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.t_values[i];
        if (t < t_lo * (1.0 - kEdge) || t > t_hi * (1.0 + kEdge)) continue;
        const double y = series.values[i] / L(t);
        if (!(y > 0.0)) fail(ErrorCode::Domain, "fit_regular_variation: values must be positive in the window");
        xs.push_back(std::log(t));
        ys.push_back(std::log(y));
    }
    if (xs.size() < 8)
        fail(ErrorCode::Shape, "fit_regular_variation: " + std::to_string(xs.size()) +
                                   " points in the window, need at least 8");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) fail(ErrorCode::Shape, "fit_regular_variation: degenerate window");

    AsymptoticFitReport r;
    r.slope_hat = sxy / sxx;
    r.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    r.t_lo = std::exp(xs.front());
    r.t_hi = std::exp(xs.back());
    r.points = xs.size();
    r.predicted_slope = rho - 1.0;
    r.predicted_const = (kernel && norm) ? *norm / std::tgamma(rho + 1.0) : std::numeric_limits<double>::quiet_NaN();
    // With a kernel the constant is read off at the top of the window with the predicted
    // exponent; otherwise it is the fitted intercept.
    if (kernel)
        r.const_hat = std::exp(ys.back() - r.predicted_slope * xs.back());
    else
        r.const_hat = std::exp(my - r.slope_hat * mx);
    r.rel_err_const = std::abs(r.const_hat / r.predicted_const - 1.0);
    return r;
}

namespace {

// Prefix integrals K1(u_m) = int_0^u_m k and K2(u_m) = int_0^u_m (u_m - r) k(r) dr, u_m = m h.
void kernel_primitives(const KernelSpec& kernel, double h, std::size_t n, std::vector<double>& k1,
                       std::vector<double>& k2) {
    boost::math::quadrature::tanh_sinh<double> ts;
    k1.assign(n + 1, 0.0);
    k2.assign(n + 1, 0.0);
    double first = 0.0;
    double moment = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
        const double a = (m - 1) * h;
        const double b = m * h;
        auto k = [&](double r) { return kernel_time_domain(kernel, r); };
        auto rk = [&](double r) { return r * kernel_time_domain(kernel, r); };
        first += ts.integrate(k, a, b, 1e-14);
        moment += ts.integrate(rk, a, b, 1e-14);
        k1[m] = first;
        k2[m] = b * first - moment;
    }
}

std::vector<double> mode_samples(const KernelSpec& kernel, double mu, double h, std::size_t n) {
    std::vector<double> g(n + 1, 1.0);
    if (mu == 0.0) return g;
    const DensityEvaluator ev(kernel);
    const VProfile decay = VProfile::from_function([mu](double tau) { return std::exp(-mu * tau); }, kInf, "mode");
    parallel_for(n, [&](std::size_t j) { g[j + 1] = subordinated_solution(decay, ev, (j + 1) * h); });
    return g;
}

ModeResidual residual_from_samples(const KernelSpec& kernel, double mu, double h, const std::vector<double>& g,
                                   double t_eval_lo) {
    const std::size_t n = g.size() - 1;
    std::vector<double> k1;
    std::vector<double> k2;
    kernel_primitives(kernel, h, n, k1, k2);
    // I(t_q) = sum_m (g_{q-m} - g_0) W0_m + (g_{q-m+1} - g_{q-m}) W1_m
    std::vector<double> w0(n + 1, 0.0);
    std::vector<double> w1(n + 1, 0.0);
    for (std::size_t m = 1; m <= n; ++m) {
        w0[m] = k1[m] - k1[m - 1];
        w1[m] = (k2[m] - k2[m - 1] - h * k1[m - 1]) / h;
    }
    // On [0, h], g - g(0) ~ -mu U(s) with U the renewal function, U(s) ~ s^nu where nu is the
    // local index of Phi at 1/h; the first panel interpolates in (s/h)^nu instead of s/h.
    const double lam = 1.0 / h;
    const double dlog = std::log(laplace_exponent(kernel, 1.001 * lam) / laplace_exponent(kernel, lam / 1.001));
    const double nu = std::clamp(dlog / (2.0 * std::log(1.001)), 1e-3, 1.0);
    boost::math::quadrature::tanh_sinh<double> ts;
    std::vector<double> first(n + 1, 0.0);
    for (std::size_t q = 1; q <= n; ++q) {
        const double tq = q * h;
        auto f = [&](double s) { return kernel_time_domain(kernel, tq - s) * std::pow(s / h, nu); };
        first[q] = ts.integrate(f, 0.0, h, 1e-13);
    }
    std::vector<double> conv(n + 1, 0.0);
    for (std::size_t q = 1; q <= n; ++q) {
        double acc = (g[1] - g[0]) * first[q];
        for (std::size_t m = 1; m < q; ++m) acc += (g[q - m] - g[0]) * w0[m] + (g[q - m + 1] - g[q - m]) * w1[m];
        conv[q] = acc;
    }
    ModeResidual out;
    out.step = h;
    out.g.label = "mode";
    out.residual.label = "mode_residual";
    for (std::size_t q = 1; q <= n; ++q) {
        out.g.t_values.push_back(q * h);
        out.g.values.push_back(g[q]);
    }
    for (std::size_t q = 1; q < n; ++q) {
        const double t = q * h;
        if (t < t_eval_lo * (1.0 - 1e-12)) continue;
        const double d = (conv[q + 1] - conv[q - 1]) / (2.0 * h);
        const double scale = mu * g[q];
        const double r = scale != 0.0 ? (d + scale) / scale : d;
        out.residual.t_values.push_back(t);
        out.residual.values.push_back(r);
        out.max_rel = std::max(out.max_rel, std::abs(r));
    }
    return out;
}

void check_mode_args(const KernelSpec& kernel, double mu, double t_end, std::size_t steps, double t_eval_lo) {
    if (!has_time_domain(kernel))
        fail(ErrorCode::Unsupported, "fde_mode_residual: kernel " + kernel.class_label() + " has no time-domain k");
    if (!(mu >= 0.0) || !std::isfinite(mu)) fail(ErrorCode::Domain, "fde_mode_residual: opsymbol must be >= 0");
    require_time(t_end, "fde_mode_residual");
    if (steps < 4) fail(ErrorCode::Shape, "fde_mode_residual: need at least 4 steps");
    if (!(t_eval_lo >= 0.0) || !(t_eval_lo < t_end))
        fail(ErrorCode::Domain, "fde_mode_residual: evaluation window must lie inside (0, t_end)");
}

}  // namespace

ModeResidual fde_mode_residual(const KernelSpec& kernel, double opsymbol, double t_end, std::size_t steps,
                               double t_eval_lo) {
    check_mode_args(kernel, opsymbol, t_end, steps, t_eval_lo);
    const double h = t_end / static_cast<double>(steps);
    return residual_from_samples(kernel, opsymbol, h, mode_samples(kernel, opsymbol, h, steps), t_eval_lo);
}

RefinementStudy fde_refinement_study(const KernelSpec& kernel, double opsymbol, double t_end,
                                     std::size_t base_steps, int levels, double t_eval_lo) {
    check_mode_args(kernel, opsymbol, t_end, base_steps, t_eval_lo);
    if (levels < 0 || levels > 12) fail(ErrorCode::Domain, "fde_refinement_study: levels must lie in [0, 12]");
    const std::size_t finest = base_steps << levels;
    const std::vector<double> fine = mode_samples(kernel, opsymbol, t_end / static_cast<double>(finest), finest);
    RefinementStudy out;
    for (int l = 0; l <= levels; ++l) {
        const std::size_t steps = base_steps << l;
        const std::size_t stride = finest / steps;
        std::vector<double> g(steps + 1);
        for (std::size_t j = 0; j <= steps; ++j) g[j] = fine[j * stride];
        const ModeResidual r = residual_from_samples(kernel, opsymbol, t_end / static_cast<double>(steps), g, t_eval_lo);
        out.steps.push_back(steps);
        out.max_rel.push_back(r.max_rel);
    }
    out.monotone = true;
    for (std::size_t i = 1; i < out.max_rel.size(); ++i) {
        if (!(out.max_rel[i] < out.max_rel[i - 1])) out.monotone = false;
        out.orders.push_back(std::log2(out.max_rel[i - 1] / out.max_rel[i]));
    }
    return out;
}

void write_csv(const AsymptoticFitReport& r, std::ostream& os) {
    os << "slope_hat,const_hat,predicted_slope,predicted_const,rel_err_const,t_lo,t_hi,r_squared,points\n"
       << std::setprecision(17) << r.slope_hat << ',' << r.const_hat << ',' << r.predicted_slope << ','
       << r.predicted_const << ',' << r.rel_err_const << ',' << r.t_lo << ',' << r.t_hi << ',' << r.r_squared << ','
       << r.points << '\n';
}

void write_text(const AsymptoticFitReport& r, std::ostream& os) {
    os << std::setprecision(10) << "fit window       [" << r.t_lo << ", " << r.t_hi << "], " << r.points
       << " points\n"
       << "slope            " << r.slope_hat << " (predicted " << r.predicted_slope << ")\n"
       << "constant         " << r.const_hat << " (predicted " << r.predicted_const << ")\n"
       << "rel. error const " << r.rel_err_const << '\n'
       << "r^2              " << r.r_squared << '\n';
}

void write_csv(const CesaroSeries& s, std::ostream& os) {
    const bool alt = s.alt.size() == s.mean.size();
    os << (alt ? "t,value,value_alt_route\n" : "t,value\n") << std::setprecision(17);
    for (std::size_t i = 0; i < s.mean.size(); ++i) {
        os << s.mean.t_values[i] << ',' << s.mean.values[i];
        if (alt) os << ',' << s.alt[i];
        os << '\n';
    }
}

void write_csv(const TimeSeries& s, std::ostream& os) {
    os << "t,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < s.size(); ++i) os << s.t_values[i] << ',' << s.values[i] << '\n';
}

}  // namespace subdiff
