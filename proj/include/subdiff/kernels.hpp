#pragma once

// Admissible memory kernels k, their Laplace transforms K(lambda), Laplace
// exponents Phi(lambda) = lambda K(lambda), and regular-variation data.

#include <complex>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace subdiff {

namespace kernel {

/// Class C1: K(lambda) = lambda^(theta - 1).
struct Stable {
    double theta;
};

/// Class C2, represented by the surrogate K(lambda) = C lambda^-1 (-ln lambda)^-kappa, lambda < 1.
struct DistributedOrderAsymptotic {
    double C;
    double kappa;
};

/// Class C3: K(lambda) = sqrt(b)/lambda (2 sqrt(2 lambda + a) - sqrt(a)).
struct InverseGamma {
    double a;
    double b;
};

/// Class C4: K(lambda) = a/lambda ln(1 + lambda/b).
struct Gamma {
    double a;
    double b;
};

/// Class C5: K(lambda) = ((lambda + beta)^theta - beta^theta)/lambda.
struct TemperedStable {
    double beta;
    double theta;
};

/// k(s) = int_0^1 s^-sigma / Gamma(1 - sigma) mu(sigma) dsigma with mu tabulated on
/// nodes of [0, 1] and interpolated linearly.
struct DistributedOrderMu {
    std::vector<double> sigma;
    std::vector<double> mu;
};

}  // namespace kernel

using KernelVariant = std::variant<kernel::Stable, kernel::DistributedOrderAsymptotic, kernel::InverseGamma,
                                   kernel::Gamma, kernel::TemperedStable, kernel::DistributedOrderMu>;

/// Immutable, validated kernel description.
class KernelSpec {
public:
    /// Validates the class invariants; throws Error(Domain) on violation.
    explicit KernelSpec(KernelVariant v);

    static KernelSpec stable(double theta) { return KernelSpec(kernel::Stable{theta}); }
    static KernelSpec distributed_asymptotic(double C, double kappa) {
        return KernelSpec(kernel::DistributedOrderAsymptotic{C, kappa});
    }
    static KernelSpec inverse_gamma(double a, double b) { return KernelSpec(kernel::InverseGamma{a, b}); }
    static KernelSpec gamma(double a, double b) { return KernelSpec(kernel::Gamma{a, b}); }
    static KernelSpec tempered_stable(double beta, double theta) {
        return KernelSpec(kernel::TemperedStable{beta, theta});
    }
    static KernelSpec distributed_mu(std::vector<double> sigma, std::vector<double> mu) {
        return KernelSpec(kernel::DistributedOrderMu{std::move(sigma), std::move(mu)});
    }

    const KernelVariant& variant() const noexcept { return v_; }

    template <class T>
    bool is() const noexcept {
        return std::holds_alternative<T>(v_);
    }

    /// Variant name as used in configuration files ("stable", "gamma", ...).
    std::string name() const;

    /// Class label C1..C5, or "mu" for the tabulated distributed-order kernel.
    std::string class_label() const;

private:
    KernelVariant v_;
};

struct RegularVariationData {
    double rho = 0.0;
    std::function<double(double)> L;  ///< slowly varying part, x > 0
    double limit_value = 0.0;         ///< lim lambda K(lambda) as lambda -> 0+
};

double laplace_K(const KernelSpec& spec, double lambda);
std::complex<double> laplace_K(const KernelSpec& spec, std::complex<double> lambda);
long double laplace_K(const KernelSpec& spec, long double lambda);

double laplace_exponent(const KernelSpec& spec, double lambda);
std::complex<double> laplace_exponent(const KernelSpec& spec, std::complex<double> lambda);
long double laplace_exponent(const KernelSpec& spec, long double lambda);

/// k(t). Unsupported for the C2 surrogate.
double kernel_time_domain(const KernelSpec& spec, double t);

RegularVariationData regular_variation_data(const KernelSpec& spec);

/// Whether k(t) is available (everything except C2).
bool has_time_domain(const KernelSpec& spec) noexcept;

/// Whether the transform is defined on the whole cut plane, i.e. densities can be
/// obtained by inversion (everything except C2).
bool supports_inversion(const KernelSpec& spec) noexcept;

/// Half-width beyond pi/2 of the sector in which exp(-tau Phi(z)) stays bounded.
double analytic_opening(const KernelSpec& spec) noexcept;

/// Abscissa of convergence of K: the transform is analytic for Re lambda > value.
double laplace_abscissa(const KernelSpec& spec) noexcept;

}  // namespace subdiff
