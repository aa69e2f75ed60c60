#pragma once

// Fundamental solutions of d^alpha_t v = t^gamma (a Delta - b (-Delta)^s) v and the
// solution operator v = K(T) * phi with internal time T = t^(gamma+1)/(gamma+1).
//
// Quadrature paths are one-dimensional. For N >= 2 only closed forms are available:
// the heat kernel, the Poisson kernel, and Gaussian data under the heat flow.

#include "subdiff/quadrature.hpp"
#include "subdiff/series.hpp"

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace subdiff {

namespace datum {

/// Centred normal density with standard deviation `width` (unit mass in every N).
struct Gaussian {
    double width;
};

/// 1 on |x| <= radius, 0 elsewhere.
struct Indicator {
    double radius;
};

/// Piecewise-linear interpolant of (x, value) on a sorted grid, zero outside. N = 1.
struct Tabulated {
    std::vector<double> x;
    std::vector<double> values;
};

}  // namespace datum

class InitialDatum {
public:
    using Variant = std::variant<datum::Gaussian, datum::Indicator, datum::Tabulated>;

    static InitialDatum gaussian(double width = 1.0);
    static InitialDatum indicator(double radius);
    static InitialDatum tabulated(std::vector<double> x, std::vector<double> values);

    const Variant& variant() const noexcept { return v_; }
    std::string name() const;

    /// phi at distance r from the origin (signed coordinate for N = 1).
    double operator()(double r, int N = 1) const;

    double l1_norm(int N = 1) const;
    double sup_norm(int N = 1) const noexcept;

    /// phi vanishes (below 1e-17 of its sup for the Gaussian) outside [lo, hi] (N = 1).
    double support_lo() const noexcept;
    double support_hi() const noexcept;

    /// Points where phi is not smooth (N = 1).
    std::vector<double> breakpoints() const;

    /// Cosine transform int phi(x) cos(xi x) dx for even data; Error(Unsupported) for tables.
    double fourier(double xi) const;

private:
    explicit InitialDatum(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// Problem data of d^alpha_t v = t^gamma (a Delta - b (-Delta)^s) v, v(0) = phi.
/// Supported: local (b = 0, a > 0, any alpha) and mixed (alpha = 1, b > 0).
struct ProblemSpec {
    double alpha = 1.0;
    double gamma = 0.0;
    double a = 1.0;
    double b = 0.0;
    double s = 0.5;
    int N = 1;
    InitialDatum phi = InitialDatum::gaussian();

    /// Error(Domain) on out-of-range fields, Error(Unsupported) for alpha < 1 with b > 0.
    void validate() const;

    bool is_local() const noexcept { return b == 0.0; }
    bool is_mixed() const noexcept { return b > 0.0; }

    /// T = t^(gamma+1)/(gamma+1).
    double internal_time(double t) const;

    /// p with sup_x v(x,t) ~ t^-p: N alpha (gamma+1)/2 (local) or N (gamma+1)/(2s) (mixed).
    double decay_exponent() const noexcept;

    /// True iff v(x, .) is integrable on (0, inf), i.e. decay_exponent() > 1.
    bool integrable() const noexcept { return decay_exponent() > 1.0; }
};

double heat_kernel(double r, double t, int N = 1);
double poisson_kernel(double r, double t, int N = 1);

/// (1/pi) int_0^inf cos(x xi) exp(-xi^(2s)) d xi. N >= 2 only at s = 1/2 (Poisson).
double fractional_profile(double x, double s, int N = 1);

/// (1/pi) int_0^inf cos(x xi) exp(-t (a xi^2 + b xi^(2s))) d xi, N = 1.
double mixed_kernel(double x, double t, double s, double a = 1.0, double b = 1.0);

/// (1/pi) int_0^inf cos(x xi) E_alpha(-t^alpha xi^2) d xi, N = 1.
double z_alpha_kernel(double x, double t, double alpha);

/// Fourier mode of the solution for phi = delta.
double solution_v_hat(const ProblemSpec& spec, double xi, double t);

/// v(x, t) by quadrature convolution K(T) * phi (closed form for Gaussian heat flow when N >= 2).
/// `x` is the signed coordinate for N = 1 and the radius |x| otherwise.
double solution_v(const ProblemSpec& spec, double x, double t);

/// v(x, t) = (1/pi) int_0^inf cos(x xi) v_hat(xi, t) phi_hat(xi) d xi (N = 1, even data).
double solution_v_fourier(const ProblemSpec& spec, double x, double t);

struct NormEstimate {
    double value = 0.0;
    double tail = 0.0;  ///< bound on the part beyond the quadrature horizon
    double horizon = 0.0;
};

/// int_0^inf v(x, tau) d tau; Error(Divergence) when the spec is not integrable.
NormEstimate time_l1_norm(const ProblemSpec& spec, double x);

/// int_0^inf exp(-ell tau) v(x, tau) d tau.
double weighted_l1_norm(const ProblemSpec& spec, double x, double ell);

/// Caputo residual of the Fourier mode u(t) = v_hat(xi, t) on a uniform grid:
/// r_n = D^alpha u(t_n) + a xi^2 t_n^gamma u(t_n), by the L1 scheme.
struct CaputoResidual {
    TimeSeries residual;
    double max_abs = 0.0;
    double late_max_abs = 0.0;  ///< over t >= t_end / 2, away from the start-up error of the scheme
    double max_mode = 0.0;      ///< max |a xi^2 t^gamma u| for scale
};

CaputoResidual caputo_residual(const ProblemSpec& spec, double xi, double t_end, std::size_t steps);

struct SolutionRow {
    double x;
    double t;
    double value;
};

/// CSV with header `x,t,value`, 17 significant digits.
void write_csv(const std::vector<SolutionRow>& rows, std::ostream& os);

}  // namespace subdiff
