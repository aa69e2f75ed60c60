#pragma once

// Density G_t(tau) of the inverse subordinator E_t and its Cesaro mean in t,
// obtained by inverting in t the transform identity
//   int_0^inf e^(-lambda t) G_t(tau) dt = K(lambda) exp(-tau lambda K(lambda)).

#include "subdiff/kernels.hpp"
#include "subdiff/laplace_inversion.hpp"
#include "subdiff/quadrature.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace subdiff {

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

/// Reusable evaluator for one kernel; immutable after construction and safe to
/// share between threads.
class DensityEvaluator {
public:
    /// Throws Error(Unsupported) for the C2 surrogate.
    explicit DensityEvaluator(KernelSpec spec, double target = 1e-13);

    const KernelSpec& kernel() const noexcept { return spec_; }
    const HyperbolicInverter& inverter() const noexcept { return fine_; }

    /// G_t(tau), t > 0, tau >= 0.
    double density(double t, double tau) const;

    /// M_t(G_t(tau)) = (1/t) int_0^t G_s(tau) ds.
    double cesaro(double t, double tau) const;

    /// Values with |fine - coarse| contour error estimates.
    Estimate density_with_error(double t, double tau) const;
    Estimate cesaro_with_error(double t, double tau) const;

    /// Independent Gaver-Stehfest evaluation of G_t(tau) (real transform samples only).
    double density_stehfest(double t, double tau, int n = 16) const;

    /// Level beyond which P(E_t > tau) <= eps, from the Chernoff bound
    /// P(E_t > tau) = P(S_tau < t) <= exp(1 - tau Phi(1/t)).
    double tau_max(double t, double eps = 1e-12) const;

    /// Upper bound on P(E_t > tau).
    double tail_bound(double t, double tau) const;

private:
    static constexpr double kAgreement = 1e-9;

    cplx transform(cplx z, double tau, bool cesaro) const;
    double dphi(double lambda) const;
    double saddle(double t, double tau, bool cesaro) const;
    Estimate invert(double t, double tau, bool cesaro) const;

    KernelSpec spec_;
    HyperbolicInverter fine_;
    HyperbolicInverter coarse_;
};

double density_G(const KernelSpec& spec, double t, double tau);
double cesaro_density(const KernelSpec& spec, double t, double tau);

/// E[E_t] = int_0^inf tau G_t(tau) dtau; Error(Accuracy) if the tail is not controlled.
double mean_inverse_subordinator(const KernelSpec& spec, double t);
double mean_inverse_subordinator(const DensityEvaluator& ev, double t);

/// Quadrature in tau for integrals against G_t or its Cesaro mean on [lo, hi],
/// hi = tau_max(t, 1e-12). Log-spaced panels, refined around the bulk of E_t when
/// the law concentrates (finite-mean subordinators at large t).
struct TauRule {
    quad::Rule rule;
    double lo = 0.0;
    double hi = 0.0;
};

TauRule tau_rule(const DensityEvaluator& ev, double t);

struct MassCheck {
    double mass = 0.0;        ///< int_0^tau_max G_t(tau) dtau
    double tail_bound = 0.0;  ///< bound on the neglected mass beyond tau_max
    double tau_max = 0.0;
};

MassCheck density_mass(const DensityEvaluator& ev, double t);

/// Sampled G_t(tau) on a (t, tau) grid, row-major in t.
struct DensityGrid {
    KernelSpec kernel;
    std::vector<double> t_values;
    std::vector<double> tau_values;
    std::vector<double> values;
    std::vector<double> err_est;
    std::vector<std::uint8_t> clamped;  ///< 1 where negative inversion noise was set to 0
    std::vector<std::uint8_t> flagged;  ///< 1 where the Gaver-Stehfest cross-check disagreed
    double min_raw = 0.0;               ///< smallest value before clamping

    double at(std::size_t i, std::size_t j) const { return values[i * tau_values.size() + j]; }
};

struct GridOptions {
    bool cross_check = false;
    double cross_check_tol = 1e-6;  ///< relative disagreement that flags a point
};

DensityGrid fill_density_grid(const DensityEvaluator& ev, std::vector<double> t_values,
                              std::vector<double> tau_values, const GridOptions& opts = {});

/// CSV with header `t,tau,G,err`, 17 significant digits.
void write_csv(const DensityGrid& grid, std::ostream& os);

}  // namespace subdiff
