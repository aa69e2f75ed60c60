#include "subdiff/kernels.hpp"

#include "subdiff/error.hpp"
#include "subdiff/quadrature.hpp"
#include "subdiff/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace subdiff {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using cplx = std::complex<double>;

double log1p_g(double w) { return std::log1p(w); }
long double log1p_g(long double w) { return std::log1p(w); }
cplx log1p_g(cplx w) {
    if (std::abs(w) < 1e-2) {
        // w - w^2/2 + ... ; 10 terms leave < 1e-20 relative
        cplx term = w;
        cplx sum = 0.0;
        for (int k = 1; k <= 10; ++k) {
            sum += (k % 2 == 1 ? 1.0 : -1.0) * term / double(k);
            term *= w;
        }
        return sum;
    }
    return std::log(1.0 + w);
}

double expm1_g(double w) { return std::expm1(w); }
long double expm1_g(long double w) { return std::expm1(w); }
cplx expm1_g(cplx w) {
    if (std::abs(w) < 1e-2) {
        cplx term = w;
        cplx sum = 0.0;
        for (int k = 1; k <= 10; ++k) {
            sum += term;
            term *= w / double(k + 1);
        }
        return sum;
    }
    return std::exp(w) - 1.0;
}

double interpolate_mu(const kernel::DistributedOrderMu& m, double s) {
    auto it = std::upper_bound(m.sigma.begin(), m.sigma.end(), s);
    if (it == m.sigma.begin()) return m.mu.front();
    if (it == m.sigma.end()) return m.mu.back();
    const std::size_t j = static_cast<std::size_t>(it - m.sigma.begin());
    const double w = (s - m.sigma[j - 1]) / (m.sigma[j] - m.sigma[j - 1]);
    return (1.0 - w) * m.mu[j - 1] + w * m.mu[j];
}

// int_0^1 mu(sigma) f(sigma) dsigma for f of exponential rate `rate` in sigma: 16-point
// Gauss-Legendre on the panels between table nodes, split so each piece spans rate * h <= 8.
template <class T, class F>
T mu_integral(const kernel::DistributedOrderMu& m, double rate, F f) {
    static const quad::Rule gl = quad::gauss_legendre(16);
    std::vector<double> breaks{0.0};
    for (double s : m.sigma)
        if (s > breaks.back()) breaks.push_back(s);
    if (breaks.back() < 1.0) breaks.push_back(1.0);
    T acc = T(0);
    for (std::size_t p = 1; p < breaks.size(); ++p) {
        const double lo = breaks[p - 1];
        const double width = breaks[p] - lo;
        const int pieces = static_cast<int>(std::clamp(std::ceil(width * rate / 8.0), 1.0, 4096.0));
        const double h = width / pieces;
        for (int j = 0; j < pieces; ++j) {
            for (std::size_t i = 0; i < gl.size(); ++i) {
                const double s = lo + h * (j + 0.5 * (gl.nodes[i] + 1.0));
                acc += T(0.5 * h * gl.weights[i] * interpolate_mu(m, s)) * f(s);
            }
        }
    }
    return acc;
}

template <class T>
T K_impl(const KernelSpec& spec, T lambda) {
    using std::exp;
    using std::log;
    using std::pow;
    using std::sqrt;
    return std::visit(
        overloaded{
            [&](const kernel::Stable& k) -> T { return pow(lambda, T(k.theta - 1.0)); },
            [&](const kernel::DistributedOrderAsymptotic& k) -> T {
                if constexpr (std::is_same_v<T, cplx>) {
                    fail(ErrorCode::Unsupported,
                         "distributed-order asymptotic kernel (C2) is a small-lambda template only; "
                         "it cannot be evaluated off the real axis");
                } else {
                    if (!(lambda < T(1)))
                        fail(ErrorCode::Unsupported,
                             "distributed-order asymptotic kernel (C2) is defined only for lambda < 1");
                    return T(k.C) / lambda * pow(-log(lambda), T(-k.kappa));
                }
            },
            [&](const kernel::InverseGamma& k) -> T {
                return T(std::sqrt(k.b)) / lambda * (T(2) * sqrt(T(2) * lambda + T(k.a)) - T(std::sqrt(k.a)));
            },
            [&](const kernel::Gamma& k) -> T { return T(k.a) / lambda * log1p_g(lambda / T(k.b)); },
            [&](const kernel::TemperedStable& k) -> T {
                return T(std::pow(k.beta, k.theta)) * expm1_g(T(k.theta) * log1p_g(lambda / T(k.beta))) / lambda;
            },
            [&](const kernel::DistributedOrderMu& m) -> T {
                const T ll = log(lambda);
                return mu_integral<T>(m, static_cast<double>(std::abs(ll)),
                                      [&](double s) { return exp(T(s - 1.0) * ll); });
            },
        },
        spec.variant());
}

void require_positive(double lambda, const char* what) {
    if (!(lambda > 0.0)) {
        std::ostringstream os;
        os << what << ": lambda must be positive, got " << lambda;
        fail(ErrorCode::Domain, os.str());
    }
}


}  // namespace

KernelSpec::KernelSpec(KernelVariant v) : v_(std::move(v)) {
    std::visit(overloaded{
                   [](const kernel::Stable& k) {
                       if (!(k.theta > 0.0 && k.theta < 1.0))
                           fail(ErrorCode::Domain, "stable kernel: theta must lie in (0, 1)");
                   },
                   [](const kernel::DistributedOrderAsymptotic& k) {
                       if (!(k.C > 0.0 && k.kappa > 0.0))
                           fail(ErrorCode::Domain, "distributed-order asymptotic kernel: C and kappa must be positive");
                   },
                   [](const kernel::InverseGamma& k) {
                       if (!(k.a >= 0.0 && k.b > 0.0))
                           fail(ErrorCode::Domain, "inverse gamma kernel: need a >= 0 and b > 0");
                   },
                   [](const kernel::Gamma& k) {
                       if (!(k.a > 0.0 && k.b > 0.0)) fail(ErrorCode::Domain, "gamma kernel: need a > 0 and b > 0");
                   },
                   [](const kernel::TemperedStable& k) {
                       if (!(k.beta > 0.0)) fail(ErrorCode::Domain, "tempered stable kernel: beta must be positive");
                       if (!(k.theta > 0.0 && k.theta < 1.0))
                           fail(ErrorCode::Domain, "tempered stable kernel: theta must lie in (0, 1)");
                   },
                   [](const kernel::DistributedOrderMu& k) {
                       if (k.sigma.size() != k.mu.size())
                           fail(ErrorCode::Shape, "distributed-order mu kernel: sigma and mu differ in length");
                       if (k.sigma.size() < 2)
                           fail(ErrorCode::Domain, "distributed-order mu kernel: need at least 2 nodes");
                       for (std::size_t i = 0; i < k.sigma.size(); ++i) {
                           if (!(k.sigma[i] >= 0.0 && k.sigma[i] <= 1.0))
                               fail(ErrorCode::Domain, "distributed-order mu kernel: nodes must lie in [0, 1]");
                           if (i > 0 && !(k.sigma[i] > k.sigma[i - 1]))
                               fail(ErrorCode::Domain, "distributed-order mu kernel: nodes must be increasing");
                           if (!(k.mu[i] > 0.0))
                               fail(ErrorCode::Domain, "distributed-order mu kernel: weights must be positive");
                       }
                   },
               },
               v_);
}

std::string KernelSpec::name() const {
    return std::visit(overloaded{
                          [](const kernel::Stable&) { return std::string("stable"); },
                          [](const kernel::DistributedOrderAsymptotic&) { return std::string("distributed_asymptotic"); },
                          [](const kernel::InverseGamma&) { return std::string("inverse_gamma"); },
                          [](const kernel::Gamma&) { return std::string("gamma"); },
                          [](const kernel::TemperedStable&) { return std::string("tempered_stable"); },
                          [](const kernel::DistributedOrderMu&) { return std::string("distributed_mu"); },
                      },
                      v_);
}

std::string KernelSpec::class_label() const {
    return std::visit(overloaded{
                          [](const kernel::Stable&) { return std::string("C1"); },
                          [](const kernel::DistributedOrderAsymptotic&) { return std::string("C2"); },
                          [](const kernel::InverseGamma&) { return std::string("C3"); },
                          [](const kernel::Gamma&) { return std::string("C4"); },
                          [](const kernel::TemperedStable&) { return std::string("C5"); },
                          [](const kernel::DistributedOrderMu&) { return std::string("mu"); },
                      },
                      v_);
}

double laplace_K(const KernelSpec& spec, double lambda) {
    require_positive(lambda, "laplace_K");
    return K_impl(spec, lambda);
}

long double laplace_K(const KernelSpec& spec, long double lambda) {
    require_positive(static_cast<double>(lambda), "laplace_K");
    return K_impl(spec, lambda);
}

std::complex<double> laplace_K(const KernelSpec& spec, std::complex<double> lambda) { return K_impl(spec, lambda); }

double laplace_exponent(const KernelSpec& spec, double lambda) { return lambda * laplace_K(spec, lambda); }
long double laplace_exponent(const KernelSpec& spec, long double lambda) { return lambda * laplace_K(spec, lambda); }
std::complex<double> laplace_exponent(const KernelSpec& spec, std::complex<double> lambda) {
    return lambda * laplace_K(spec, lambda);
}

double kernel_time_domain(const KernelSpec& spec, double t) {
    if (!(t > 0.0)) fail(ErrorCode::Domain, "kernel_time_domain: t must be positive");
    return std::visit(
        overloaded{
            [&](const kernel::Stable& k) { return std::pow(t, -k.theta) * rgamma(1.0 - k.theta); },
            [&](const kernel::DistributedOrderAsymptotic&) -> double {
                fail(ErrorCode::Unsupported,
                     "distributed-order asymptotic kernel (C2) has no time-domain representation");
            },
            [&](const kernel::InverseGamma& k) {
                // Inverse transform of sqrt(b)/lambda (2 sqrt(2 lambda + a) - sqrt(a)).
                const double x = std::sqrt(0.5 * k.a * t);
                return 2.0 * std::sqrt(2.0 * k.b / kPi) * std::exp(-0.5 * k.a * t) / std::sqrt(t) +
                       std::sqrt(k.a * k.b) * (2.0 * std::erf(x) - 1.0);
            },
            [&](const kernel::Gamma& k) { return k.a * upper_incomplete_gamma(0.0, k.b * t); },
            [&](const kernel::TemperedStable& k) {
                return k.theta * std::pow(k.beta, k.theta) * upper_incomplete_gamma(-k.theta, k.beta * t) *
                       rgamma(1.0 - k.theta);
            },
            [&](const kernel::DistributedOrderMu& m) {
                const double lt = std::log(t);
                return mu_integral<double>(m, std::abs(lt),
                                           [&](double s) { return std::exp(-s * lt) * rgamma(1.0 - s); });
            },
        },
        spec.variant());
}

RegularVariationData regular_variation_data(const KernelSpec& spec) {
    return std::visit(
        overloaded{
            [](const kernel::Stable& k) {
                return RegularVariationData{1.0 - k.theta, [](double) { return 1.0; }, 0.0};
            },
            [](const kernel::DistributedOrderAsymptotic& k) {
                return RegularVariationData{
                    1.0, [C = k.C, kappa = k.kappa](double x) { return C * std::pow(std::log(x), -kappa); }, 0.0};
            },
            [](const kernel::InverseGamma& k) {
                // a = 0 leaves K = 2 sqrt(2b) lambda^(-1/2), a pure power.
                if (k.a == 0.0)
                    return RegularVariationData{0.5, [c = 2.0 * std::sqrt(2.0 * k.b)](double) { return c; }, 0.0};
                return RegularVariationData{
                    1.0,
                    [a = k.a, b = k.b](double x) {
                        return std::sqrt(b) * (2.0 * std::sqrt(2.0 / x + a) - std::sqrt(a));
                    },
                    k.a > 0.0 ? std::sqrt(k.a * k.b) : 0.0};
            },
            [](const kernel::Gamma& k) {
                return RegularVariationData{
                    0.0, [a = k.a, b = k.b](double x) { return a * x * std::log1p(1.0 / (b * x)); }, 0.0};
            },
            [](const kernel::TemperedStable& k) {
                return RegularVariationData{0.0,
                                            [beta = k.beta, theta = k.theta](double x) {
                                                return x * std::pow(beta, theta) *
                                                       std::expm1(theta * std::log1p(1.0 / (x * beta)));
                                            },
                                            0.0};
            },
            [](const kernel::DistributedOrderMu& k) {
                // L(x) = int_0^1 x^-sigma mu(sigma) dsigma, i.e. rho = 1.
                return RegularVariationData{1.0,
                                            [k](double arg) {
                                                const double l = std::log(arg);
                                                return mu_integral<double>(
                                                    k, std::abs(l), [l](double s) { return std::exp(-s * l); });
                                            },
                                            0.0};
            },
        },
        spec.variant());
}

bool has_time_domain(const KernelSpec& spec) noexcept { return !spec.is<kernel::DistributedOrderAsymptotic>(); }

bool supports_inversion(const KernelSpec& spec) noexcept { return !spec.is<kernel::DistributedOrderAsymptotic>(); }

double analytic_opening(const KernelSpec& spec) noexcept {
    static constexpr double kMin = 0.2;
    static constexpr double kMax = kPi / 2;
    auto from_index = [](double theta) {
        // exp(-tau z^theta) is bounded for |arg z| <= pi / (2 theta)
        return std::clamp(kPi / (2.0 * theta) - kPi / 2, kMin, kMax);
    };
    return std::visit(overloaded{
                          [&](const kernel::Stable& k) { return from_index(k.theta); },
                          [&](const kernel::TemperedStable& k) { return from_index(k.theta); },
                          [](const kernel::DistributedOrderMu&) { return kMin; },
                          [](const auto&) { return kMax; },
                      },
                      spec.variant());
}

double laplace_abscissa(const KernelSpec& spec) noexcept {
    return std::visit(overloaded{
                          [](const kernel::Gamma& k) { return -k.b; },
                          [](const kernel::TemperedStable& k) { return -k.beta; },
                          [](const auto&) { return 0.0; },
                      },
                      spec.variant());
}

}  // namespace subdiff
