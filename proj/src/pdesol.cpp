#include "subdiff/pdesol.hpp"

#include "subdiff/error.hpp"
#include "subdiff/specfun.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>

namespace subdiff {

namespace {

constexpr double kPi = 3.14159265358979323846;
// exp(-kCut) is below double resolution relative to O(1) integrands.
constexpr double kCut = 41.0;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_time(double t, const char* what) {
    if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::Domain, std::string(what) + ": t must be positive");
}

void require_dim(int N, const char* what) {
    if (N < 1) fail(ErrorCode::Domain, std::string(what) + ": dimension must be positive");
}

double ball_volume(double r, int N) { return std::pow(kPi, 0.5 * N) * std::pow(r, N) / std::tgamma(0.5 * N + 1.0); }

// Gauss-Legendre nodes on [0, xi_max] resolving cos(x xi) for |x| <= x_max, with panels
// graded geometrically towards 0 when the symbol has a xi^(2s) cusp there.
quad::Rule cosine_rule(double xi_max, double x_max, bool graded) {
    const double width = std::min(xi_max / 64.0, kPi / std::max(x_max, 1e-300));
    const quad::Rule g = quad::gauss_legendre(8);
    quad::Rule out;
    auto panel = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi);
        const double h = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < g.size(); ++i) {
            out.nodes.push_back(c + h * g.nodes[i]);
            out.weights.push_back(h * g.weights[i]);
        }
    };
    if (graded) {
        double hi = width;
        std::vector<double> cuts;
        for (int k = 0; k < 48; ++k, hi *= 0.5) cuts.push_back(hi);
        panel(0.0, cuts.back());
        for (std::size_t k = cuts.size() - 1; k > 0; --k) panel(cuts[k], cuts[k - 1]);
    } else {
        panel(0.0, width);
    }
    const auto n = static_cast<std::size_t>(std::ceil((xi_max - width) / width));
    const double step = (xi_max - width) / static_cast<double>(std::max<std::size_t>(n, 1));
    for (std::size_t k = 0; k < n; ++k) panel(width + k * step, width + (k + 1) * step);
    return out;
}

// (1/pi) sum_j w_j m_j cos(x xi_j) for a tabulated symbol.
struct CosineSeries {
    std::vector<double> xi;
    std::vector<double> wm;

    template <class Symbol>
    CosineSeries(Symbol&& m, double xi_max, double x_max, bool graded) {
        const quad::Rule r = cosine_rule(xi_max, x_max, graded);
        xi = r.nodes;
        wm.resize(r.size());
        for (std::size_t j = 0; j < r.size(); ++j) wm[j] = r.weights[j] * m(r.nodes[j]) / kPi;
    }

    double operator()(double x) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < xi.size(); ++j) acc += wm[j] * std::cos(x * xi[j]);
        return acc;
    }
};

// Frequency beyond which exp(-t (a xi^2 + b xi^(2s))) is negligible.
double mixed_cutoff(double t, double a, double b, double s) {
    if (a > 0.0) return std::sqrt(kCut / (t * a));
    return std::pow(kCut / (t * b), 1.0 / (2.0 * s));
}

// Z_alpha(y, 1) on y in [0, kZMax], from
//   E_alpha(-xi^2) = A/(1+xi^2) + B/(1+xi^2)^2 + O(xi^-6),
// A = 1/Gamma(1-alpha), B = A - 1/Gamma(1-2 alpha); the subtracted terms transform to
// A e^-y / 2 and B (1+y) e^-y / 4, the remainder is integrated on [0, kZXi].
class ZProfile {
public:
    static constexpr double kZMax = 60.0;
    static constexpr double kZStep = 0.02;
    static constexpr double kZXi = 200.0;

    explicit ZProfile(double alpha) {
        const double A = rgamma(1.0 - alpha);
        const double B = A - rgamma(1.0 - 2.0 * alpha);
        const quad::Rule r = cosine_rule(kZXi, kZMax, false);
        const std::size_t n = r.size();
        std::vector<double> wr(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double xi = r.nodes[j];
            const double q = 1.0 / (1.0 + xi * xi);
            const double e = mittag_leffler(MLParams{alpha, -xi * xi});
            wr[j] = r.weights[j] * (e - A * q - B * q * q) / kPi;
        }
        const auto points = static_cast<std::size_t>(std::lround(kZMax / kZStep)) + 1;
        std::vector<double> values(points);
        // cos(k h xi) by rotation, reseeded every 64 steps
        std::vector<double> c(n), sn(n), rc(n), rs(n);
        for (std::size_t j = 0; j < n; ++j) {
            rc[j] = std::cos(kZStep * r.nodes[j]);
            rs[j] = std::sin(kZStep * r.nodes[j]);
        }
        for (std::size_t k = 0; k < points; ++k) {
            const double y = k * kZStep;
            if (k % 64 == 0) {
                for (std::size_t j = 0; j < n; ++j) {
                    c[j] = std::cos(y * r.nodes[j]);
                    sn[j] = std::sin(y * r.nodes[j]);
                }
            }
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += wr[j] * c[j];
            values[k] = acc + 0.5 * A * std::exp(-y) + 0.25 * B * (1.0 + y) * std::exp(-y);
            for (std::size_t j = 0; j < n; ++j) {
                const double cj = c[j] * rc[j] - sn[j] * rs[j];
                sn[j] = sn[j] * rc[j] + c[j] * rs[j];
                c[j] = cj;
            }
        }
        spline_ = std::make_unique<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
            values.begin(), values.end(), 0.0, kZStep);
    }

    double operator()(double y) const {
        y = std::abs(y);
        if (y >= kZMax) return 0.0;
        return std::max(0.0, (*spline_)(y));
    }

private:
    std::unique_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
};

std::shared_ptr<const ZProfile> z_profile(double alpha) {
    static std::mutex mutex;
    static std::map<double, std::shared_ptr<const ZProfile>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[alpha];
    if (!slot) slot = std::make_shared<const ZProfile>(alpha);
    return slot;
}

// Fundamental solution of the spec at internal time T, as a function of x.
class SpecKernel {
public:
    SpecKernel(const ProblemSpec& spec, double T, double x_max) : spec_(spec), T_(T) {
        if (spec.is_mixed()) {
            const double a = spec.a, b = spec.b, s = spec.s;
            symbol_ = [a, b, s, T](double xi) { return std::exp(-T * (a * xi * xi + b * std::pow(xi, 2.0 * s))); };
            // Cosine series on a core holding at most ~kMaxNodes nodes; beyond it (only
            // for very small T) the far-field expansion is accurate to O(a T / x^2).
            const double cut = mixed_cutoff(T, a, b, s);
            core_ = std::min(x_max, std::max(kCoreWidths * std::sqrt(a * T), kMaxNodes * kPi / (8.0 * cut)));
            series_ = std::make_unique<CosineSeries>(symbol_, cut, core_, true);
        } else if (spec.alpha < 1.0) {
            z_ = z_profile(spec.alpha);
            scale_ = std::pow(T, 0.5 * spec.alpha) * std::sqrt(spec.a);
        }
    }

    double operator()(double x) const {
        if (series_) {
            if (std::abs(x) <= core_) return std::max(0.0, (*series_)(x));
            return far_field(std::abs(x));
        }
        if (z_) return (*z_)(x / scale_) / scale_;
        return heat_kernel(x, spec_.a * T_, 1);
    }

    /// Length scale of the kernel core.
    double width() const {
        if (spec_.is_mixed()) return std::sqrt(spec_.a * T_) + std::pow(spec_.b * T_, 0.5 / spec_.s);
        if (z_) return scale_;
        return std::sqrt(2.0 * spec_.a * T_);
    }

    /// Distance beyond which the kernel is negligible (infinite for heavy tails).
    double reach() const {
        if (spec_.is_mixed()) return std::numeric_limits<double>::infinity();
        if (z_) return ZProfile::kZMax * scale_;
        return std::sqrt(4.0 * kCut * spec_.a * T_);
    }

private:
    static constexpr double kCoreWidths = 40.0;
    static constexpr double kMaxNodes = 4000.0;

    // Polya series of the fractional heat kernel at time b T,
    //   P(x) ~ sum_k (-1)^(k+1) (b T)^k Gamma(1 + 2 s k) sin(pi s k) / (pi k!) x^(-1-2sk),
    // plus the heat correction a T P''(x) from the Gaussian factor.
    double far_field(double x) const {
        const double s = spec_.s;
        const double bt = spec_.b * T_;
        double acc = 0.0;
        double pow_bt = 1.0;
        for (int k = 1; k <= 3; ++k) {
            pow_bt *= bt;
            const double e = 1.0 + 2.0 * s * k;
            const double c = pow_bt * std::tgamma(e) * std::sin(kPi * s * k) / (kPi * std::tgamma(k + 1.0));
            const double term = c * std::pow(x, -e) * (1.0 + spec_.a * T_ * e * (e + 1.0) / (x * x));
            acc += (k % 2 == 1) ? term : -term;
        }
        return acc;
    }

    const ProblemSpec& spec_;
    double T_;
    double scale_ = 1.0;
    double core_ = 0.0;
    std::function<double(double)> symbol_;
    std::shared_ptr<const ZProfile> z_;
    std::unique_ptr<CosineSeries> series_;
};

// Length on which phi varies smoothly between its breakpoints.
double smooth_scale(const InitialDatum& phi) {
    return std::visit(overloaded{
                          [](const datum::Gaussian& g) { return g.width; },
                          [](const datum::Indicator& d) { return d.radius; },
                          [](const datum::Tabulated& d) { return d.x.back() - d.x.front(); },
                      },
                      phi.variant());
}

}  // namespace

// ---------------------------------------------------------------- initial data

InitialDatum InitialDatum::gaussian(double width) {
    if (!(width > 0.0) || !std::isfinite(width)) fail(ErrorCode::Domain, "Gaussian datum: width must be positive");
    return InitialDatum(datum::Gaussian{width});
}

InitialDatum InitialDatum::indicator(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        fail(ErrorCode::Domain, "Indicator datum: radius must be positive");
    return InitialDatum(datum::Indicator{radius});
}

InitialDatum InitialDatum::tabulated(std::vector<double> x, std::vector<double> values) {
    if (x.size() != values.size()) fail(ErrorCode::Shape, "tabulated datum: x and values differ in length");
    if (x.size() < 2) fail(ErrorCode::Shape, "tabulated datum: need at least two points");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(values[i]))
            fail(ErrorCode::Domain, "tabulated datum: non-finite entry");
        if (values[i] < 0.0) fail(ErrorCode::Domain, "tabulated datum: values must be non-negative");
        if (i > 0 && !(x[i] > x[i - 1])) fail(ErrorCode::Shape, "tabulated datum: x must be strictly increasing");
    }
    return InitialDatum(datum::Tabulated{std::move(x), std::move(values)});
}

std::string InitialDatum::name() const {
    return std::visit(overloaded{
                          [](const datum::Gaussian&) { return std::string("gaussian"); },
                          [](const datum::Indicator&) { return std::string("indicator"); },
                          [](const datum::Tabulated&) { return std::string("tabulated"); },
                      },
                      v_);
}

double InitialDatum::operator()(double r, int N) const {
    return std::visit(overloaded{
                          [&](const datum::Gaussian& g) {
                              const double w2 = g.width * g.width;
                              return std::pow(2.0 * kPi * w2, -0.5 * N) * std::exp(-0.5 * r * r / w2);
                          },
                          [&](const datum::Indicator& d) { return std::abs(r) <= d.radius ? 1.0 : 0.0; },
                          [&](const datum::Tabulated& d) {
                              if (N != 1) fail(ErrorCode::Unsupported, "tabulated datum is one-dimensional");
                              if (r < d.x.front() || r > d.x.back()) return 0.0;
                              const auto it = std::upper_bound(d.x.begin(), d.x.end(), r);
                              const std::size_t i = std::min<std::size_t>(it - d.x.begin(), d.x.size() - 1);
                              const double x0 = d.x[i - 1], x1 = d.x[i];
                              const double w = (r - x0) / (x1 - x0);
                              return (1.0 - w) * d.values[i - 1] + w * d.values[i];
                          },
                      },
                      v_);
}

double InitialDatum::l1_norm(int N) const {
    require_dim(N, "l1_norm");
    return std::visit(overloaded{
                          [](const datum::Gaussian&) { return 1.0; },
                          [&](const datum::Indicator& d) { return ball_volume(d.radius, N); },
                          [&](const datum::Tabulated& d) {
                              if (N != 1) fail(ErrorCode::Unsupported, "tabulated datum is one-dimensional");
                              double acc = 0.0;
                              for (std::size_t i = 1; i < d.x.size(); ++i)
                                  acc += 0.5 * (d.values[i] + d.values[i - 1]) * (d.x[i] - d.x[i - 1]);
                              return acc;
                          },
                      },
                      v_);
}

double InitialDatum::sup_norm(int N) const noexcept {
    return std::visit(overloaded{
                          [&](const datum::Gaussian& g) { return std::pow(2.0 * kPi * g.width * g.width, -0.5 * N); },
                          [](const datum::Indicator&) { return 1.0; },
                          [](const datum::Tabulated& d) { return *std::max_element(d.values.begin(), d.values.end()); },
                      },
                      v_);
}

double InitialDatum::support_lo() const noexcept {
    return std::visit(overloaded{
                          [](const datum::Gaussian& g) { return -9.0 * g.width; },
                          [](const datum::Indicator& d) { return -d.radius; },
                          [](const datum::Tabulated& d) { return d.x.front(); },
                      },
                      v_);
}

double InitialDatum::support_hi() const noexcept {
    return std::visit(overloaded{
                          [](const datum::Gaussian& g) { return 9.0 * g.width; },
                          [](const datum::Indicator& d) { return d.radius; },
                          [](const datum::Tabulated& d) { return d.x.back(); },
                      },
                      v_);
}

std::vector<double> InitialDatum::breakpoints() const {
    return std::visit(overloaded{
                          [](const datum::Gaussian&) { return std::vector<double>{0.0}; },
                          [](const datum::Indicator& d) { return std::vector<double>{-d.radius, d.radius}; },
                          [](const datum::Tabulated& d) { return d.x; },
                      },
                      v_);
}

double InitialDatum::fourier(double xi) const {
    return std::visit(overloaded{
                          [&](const datum::Gaussian& g) { return std::exp(-0.5 * g.width * g.width * xi * xi); },
                          [&](const datum::Indicator& d) {
                              const double u = d.radius * xi;
                              return std::abs(u) < 1e-8 ? 2.0 * d.radius * (1.0 - u * u / 6.0)
                                                        : 2.0 * std::sin(u) / xi;
                          },
                          [](const datum::Tabulated&) -> double {
                              fail(ErrorCode::Unsupported, "Fourier route needs Gaussian or indicator data");
                          },
                      },
                      v_);
}

// ---------------------------------------------------------------- problem

void ProblemSpec::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::Domain, "problem: alpha must lie in (0, 1]");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) fail(ErrorCode::Domain, "problem: gamma must be >= 0");
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        fail(ErrorCode::Domain, "problem: a and b must be >= 0");
    if (a == 0.0 && b == 0.0) fail(ErrorCode::Domain, "problem: (a, b) must not both vanish");
    if (!(s > 0.0 && s < 1.0)) fail(ErrorCode::Domain, "problem: s must lie in (0, 1)");
    require_dim(N, "problem");
    if (alpha < 1.0 && b > 0.0)
        fail(ErrorCode::Unsupported, "problem: alpha < 1 with a nonlocal term is not a supported configuration");
    if (a == 0.0) fail(ErrorCode::Unsupported, "problem: a = 0 is not a supported configuration");
    if (N > 1 && std::holds_alternative<datum::Tabulated>(phi.variant()))
        fail(ErrorCode::Unsupported, "problem: tabulated data are one-dimensional");
}

double ProblemSpec::internal_time(double t) const { return std::pow(t, gamma + 1.0) / (gamma + 1.0); }

double ProblemSpec::decay_exponent() const noexcept {
    if (is_mixed()) return N * (gamma + 1.0) / (2.0 * s);
    return N * alpha * (gamma + 1.0) / 2.0;
}

// ---------------------------------------------------------------- kernels

double heat_kernel(double r, double t, int N) {
    require_time(t, "heat_kernel");
    require_dim(N, "heat_kernel");
    return std::pow(4.0 * kPi * t, -0.5 * N) * std::exp(-r * r / (4.0 * t));
}

double poisson_kernel(double r, double t, int N) {
    require_time(t, "poisson_kernel");
    require_dim(N, "poisson_kernel");
    const double m = 0.5 * (N + 1);
    return std::tgamma(m) * t / (std::pow(kPi, m) * std::pow(t * t + r * r, m));
}

double fractional_profile(double x, double s, int N) {
    if (!(s > 0.0 && s < 1.0)) fail(ErrorCode::Domain, "fractional_profile: s must lie in (0, 1)");
    require_dim(N, "fractional_profile");
    if (s == 0.5) return poisson_kernel(x, 1.0, N);
    if (N != 1) fail(ErrorCode::Unsupported, "fractional_profile: N >= 2 only at s = 1/2");
    const double inv = 1.0 / (2.0 * s);
    x = std::abs(x);
    if (x == 0.0) return std::tgamma(1.0 + inv) / kPi;
    auto m = [s](double xi) { return std::exp(-std::pow(xi, 2.0 * s)); };
    thread_local boost::math::quadrature::ooura_fourier_cos<double> rule(1e-12, 8);
    const auto [value, rel] = rule.integrate(m, x);
    if (!(rel <= 1e-8)) fail(ErrorCode::Accuracy, "fractional_profile: Fourier quadrature did not converge", value / kPi);
    return value / kPi;
}

double mixed_kernel(double x, double t, double s, double a, double b) {
    require_time(t, "mixed_kernel");
    if (!(s > 0.0 && s < 1.0)) fail(ErrorCode::Domain, "mixed_kernel: s must lie in (0, 1)");
    if (!(a > 0.0) || !(b >= 0.0)) fail(ErrorCode::Domain, "mixed_kernel: need a > 0, b >= 0");
    if (b == 0.0) return heat_kernel(x, a * t, 1);
    ProblemSpec spec;
    spec.a = a;
    spec.b = b;
    spec.s = s;
    // Same core/far-field split as the solution operator, so large |x| stays cheap.
    const SpecKernel K(spec, t, std::abs(x));
    const double v = K(x);
    if (!std::isfinite(v)) fail(ErrorCode::Accuracy, "mixed_kernel: quadrature failed");
    return v;
}

double z_alpha_kernel(double x, double t, double alpha) {
    require_time(t, "z_alpha_kernel");
    if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::Domain, "z_alpha_kernel: alpha must lie in (0, 1]");
    if (alpha == 1.0) return heat_kernel(x, t, 1);
    const double scale = std::pow(t, 0.5 * alpha);
    return (*z_profile(alpha))(x / scale) / scale;
}

// ---------------------------------------------------------------- solutions

double solution_v_hat(const ProblemSpec& spec, double xi, double t) {
    spec.validate();
    require_time(t, "solution_v_hat");
    const double T = spec.internal_time(t);
    const double k2 = xi * xi;
    if (spec.is_mixed()) return std::exp(-T * (spec.a * k2 + spec.b * std::pow(std::abs(xi), 2.0 * spec.s)));
    if (spec.alpha == 1.0) return std::exp(-T * spec.a * k2);
    return mittag_leffler(MLParams{spec.alpha, -spec.a * std::pow(T, spec.alpha) * k2});
}

double solution_v(const ProblemSpec& spec, double x, double t) {
    spec.validate();
    require_time(t, "solution_v");
    const double T = spec.internal_time(t);
    if (spec.N > 1) {
        const auto* g = std::get_if<datum::Gaussian>(&spec.phi.variant());
        if (!spec.is_local() || spec.alpha != 1.0 || g == nullptr)
            fail(ErrorCode::Unsupported, "solution_v: N >= 2 only for Gaussian data under the heat flow");
        // heat semigroup: Gaussian of variance w^2 + 2 a T
        const double var = g->width * g->width + 2.0 * spec.a * T;
        return std::pow(2.0 * kPi * var, -0.5 * spec.N) * std::exp(-0.5 * x * x / var);
    }

    const SpecKernel K(spec, T, std::max(std::abs(x - spec.phi.support_lo()), std::abs(x - spec.phi.support_hi())));
    const double lo = std::max(spec.phi.support_lo(), x - K.reach());
    const double hi = std::min(spec.phi.support_hi(), x + K.reach());
    if (!(hi > lo)) return 0.0;

    // Composite Gauss on intervals graded geometrically around y = x (kernel core)
    // and cut at the breakpoints of phi; no interval longer than half the phi scale.
    std::vector<double> cuts = spec.phi.breakpoints();
    cuts.push_back(x);
    const double w = K.width();
    for (double d = 0.25 * w; d < hi - lo; d *= 2.0) {
        cuts.push_back(x - d);
        cuts.push_back(x + d);
    }
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const quad::Rule g = quad::gauss_legendre(16);
    const double max_panel = 0.5 * smooth_scale(spec.phi);
    double acc = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double a = std::max(cuts[i - 1], lo);
        const double b = std::min(cuts[i], hi);
        if (!(b > a)) continue;
        const int panels = static_cast<int>(std::ceil((b - a) / max_panel));
        const double step = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double c = a + (p + 0.5) * step;
            const double h = 0.5 * step;
            for (std::size_t k = 0; k < g.size(); ++k) {
                const double y = c + h * g.nodes[k];
                acc += h * g.weights[k] * K(x - y) * spec.phi(y, 1);
            }
        }
    }
    if (!std::isfinite(acc)) fail(ErrorCode::Accuracy, "solution_v: convolution quadrature failed");
    return std::max(0.0, acc);
}

double solution_v_fourier(const ProblemSpec& spec, double x, double t) {
    spec.validate();
    require_time(t, "solution_v_fourier");
    if (spec.N != 1) fail(ErrorCode::Unsupported, "solution_v_fourier: N = 1 only");
    const bool gaussian = std::holds_alternative<datum::Gaussian>(spec.phi.variant());
    if (!gaussian && spec.is_local() && spec.alpha < 1.0)
        fail(ErrorCode::Unsupported, "solution_v_fourier: slowly decaying symbol needs Gaussian data");
    const double T = spec.internal_time(t);
    double cut = mixed_cutoff(T, spec.a, spec.b, spec.s);
    if (const auto* g = std::get_if<datum::Gaussian>(&spec.phi.variant()))
        cut = std::min(cut, std::sqrt(2.0 * kCut) / g->width);
    if (spec.is_local() && spec.alpha < 1.0) cut = std::sqrt(2.0 * kCut) / std::get<datum::Gaussian>(spec.phi.variant()).width;
    const CosineSeries series([&](double xi) { return solution_v_hat(spec, xi, t) * spec.phi.fourier(xi); }, cut,
                              std::abs(x), spec.is_mixed());
    return series(x);
}

namespace {

// int_a^b f: linear Gauss-Kronrod up to 1e-3, then decades in u = ln(tau), where the
// solutions are smooth and slowly varying.
template <class F>
double integrate_decades(F&& f, double a, double b) {
    constexpr double kFirst = 1e-3;
    double acc = 0.0;
    double lo = a;
    if (lo < kFirst) {
        const double hi = std::min(b, kFirst);
        acc += quad::adaptive(f, lo, hi, 1e-10, 10).value;
        lo = hi;
    }
    auto g = [&](double u) {
        const double tau = std::exp(u);
        return f(tau) * tau;
    };
    while (lo < b) {
        const double hi = std::min(b, 10.0 * lo);
        acc += quad::adaptive(g, std::log(lo), std::log(hi), 1e-10, 10).value;
        lo = hi;
    }
    return acc;
}

}  // namespace

NormEstimate time_l1_norm(const ProblemSpec& spec, double x) {
    spec.validate();
    if (!spec.integrable())
        fail(ErrorCode::Divergence, "time_l1_norm: decay exponent " + std::to_string(spec.decay_exponent()) +
                                        " <= 1, v(x, .) is not integrable");
    const double p = spec.decay_exponent();
    auto v = [&](double tau) { return tau == 0.0 ? spec.phi(x, spec.N) : solution_v(spec, x, tau); };

    constexpr double kMaxHorizon = 1e15;
    constexpr double kTailTolerance = 1e-6;
    double horizon = 1e2;
    double acc = integrate_decades(v, 0.0, horizon);
    double tail = v(horizon) * horizon / (p - 1.0);
    // v(tau) ~ v(H) (H / tau)^p beyond the horizon
    while (tail > kTailTolerance * acc && horizon < kMaxHorizon) {
        acc += integrate_decades(v, horizon, 10.0 * horizon);
        horizon *= 10.0;
        tail = v(horizon) * horizon / (p - 1.0);
    }
    return {acc + tail, tail, horizon};
}

double weighted_l1_norm(const ProblemSpec& spec, double x, double ell) {
    spec.validate();
    if (!(ell > 0.0) || !std::isfinite(ell)) fail(ErrorCode::Domain, "weighted_l1_norm: ell must be positive");
    auto f = [&](double tau) {
        const double vt = tau == 0.0 ? spec.phi(x, spec.N) : solution_v(spec, x, tau);
        return std::exp(-ell * tau) * vt;
    };
    // beyond kCut/ell the remainder is below sup|phi| e^-kCut / ell
    return integrate_decades(f, 0.0, kCut / ell);
}

CaputoResidual caputo_residual(const ProblemSpec& spec, double xi, double t_end, std::size_t steps) {
    spec.validate();
    if (!spec.is_local() || !(spec.alpha < 1.0))
        fail(ErrorCode::Unsupported, "caputo_residual: needs the local problem with alpha < 1");
    require_time(t_end, "caputo_residual");
    if (steps < 3) fail(ErrorCode::Shape, "caputo_residual: need at least 3 steps");
    const double h = t_end / static_cast<double>(steps);
    UniformSamples u{h, std::vector<double>(steps + 1)};
    u.values[0] = 1.0;
    for (std::size_t k = 1; k <= steps; ++k) u.values[k] = solution_v_hat(spec, xi, k * h);
    const TimeSeries d = caputo_derivative_l1(u, spec.alpha);

    CaputoResidual out;
    out.residual.label = "caputo_residual";
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double t = d.t_values[i];
        const std::size_t k = static_cast<std::size_t>(std::lround(t / h));
        const double mode = spec.a * xi * xi * std::pow(t, spec.gamma) * u.values[k];
        const double r = d.values[i] + mode;
        out.residual.t_values.push_back(t);
        out.residual.values.push_back(r);
        out.max_abs = std::max(out.max_abs, std::abs(r));
        if (2.0 * t >= t_end) out.late_max_abs = std::max(out.late_max_abs, std::abs(r));
        out.max_mode = std::max(out.max_mode, std::abs(mode));
    }
    return out;
}

void write_csv(const std::vector<SolutionRow>& rows, std::ostream& os) {
    os << "x,t,value\n" << std::setprecision(17);
    for (const SolutionRow& r : rows) os << r.x << ',' << r.t << ',' << r.value << '\n';
}

}  // namespace subdiff
