#pragma once

// Subordination v^E(x, t) = int v(x, tau) G_t(tau) dtau, Cesaro means of v^E,
// Laplace-side checks and regular-variation fits of the long-time behaviour.

#include "subdiff/invsub.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/pdesol.hpp"
#include "subdiff/series.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace subdiff {

/// tau -> v(x, tau) at a fixed point x, with its power-law tail v ~ tau^-p.
class VProfile {
public:
    /// Exact callable; `tail_exponent` is used only for tail estimates of time integrals.
    static VProfile from_function(std::function<double(double)> v, double tail_exponent, std::string label = "synthetic");

    /// Table on tau > 0 (strictly increasing), interpolated linearly in (ln tau, v); constant
    /// below the first node and continued by v_last (tau_last / tau)^p beyond the last.
    static VProfile from_table(std::vector<double> tau, std::vector<double> values, double tail_exponent,
                               std::string label = "table");

    /// Tabulates pdesol::solution_v on a log grid in tau up to the onset of the power law.
    static VProfile from_spec(const ProblemSpec& spec, double x);

    double operator()(double tau) const { return v_(tau); }
    double tail_exponent() const noexcept { return p_; }
    const std::string& label() const noexcept { return label_; }

    /// int_0^inf exp(-ell tau) v(tau) dtau, ell >= 0; Error(Divergence) for ell = 0 and p <= 1.
    double laplace(double ell) const;

private:
    VProfile(std::function<double(double)> v, double p, std::string label)
        : v_(std::move(v)), p_(p), label_(std::move(label)) {}

    std::function<double(double)> v_;
    double p_;
    std::string label_;
};

/// v^E(t) = int_0^inf v(tau) G_t(tau) dtau.
double subordinated_solution(const VProfile& v, const DensityEvaluator& ev, double t);

/// Error(Divergence) for non-integrable specs unless the kernel is of class C3 with a > 0.
double subordinated_solution(const ProblemSpec& spec, const KernelSpec& kernel, double x, double t);

struct CesaroOptions {
    bool alt_route = true;             ///< also time-average v^E directly
    double warn_discrepancy = 0.01;    ///< relative route disagreement that raises the warning
};

struct CesaroSeries {
    TimeSeries mean;                   ///< int v(tau) M_t(G_t(tau)) dtau
    std::vector<double> alt;           ///< (1/t) int_0^t v^E(s) ds, empty when not computed
    double max_discrepancy = 0.0;      ///< max relative |mean - alt|
    std::string warning;               ///< non-empty when the routes disagree
};

CesaroSeries cesaro_mean_vE(const VProfile& v, const DensityEvaluator& ev, const std::vector<double>& t_grid,
                            const CesaroOptions& opts = {});
CesaroSeries cesaro_mean_vE(const ProblemSpec& spec, const KernelSpec& kernel, double x,
                            const std::vector<double>& t_grid, const CesaroOptions& opts = {});

/// (1/t) int_0^t v^E(s) ds by quadrature in ln s.
double cesaro_direct(const VProfile& v, const DensityEvaluator& ev, double t);

/// lambda w(lambda) / K(lambda) = int_0^inf exp(-tau Phi(lambda)) v(tau) dtau, no inversion.
double laplace_side_w(const VProfile& v, const KernelSpec& kernel, double lambda);
double laplace_side_w(const ProblemSpec& spec, const KernelSpec& kernel, double x, double lambda);

/// Long-time prediction for M_t(v^E). `norm` is ||v||_1, or ||v||_{1,sqrt(ab)} for class C3.
double predicted_asymptote(const KernelSpec& kernel, double norm, double t);

/// ||v||_1 t^-1 K(1/t) / Gamma(rho + 1).
double generic_asymptote(const KernelSpec& kernel, double norm, double t);

struct AsymptoticFitReport {
    double slope_hat = 0.0;
    double const_hat = 0.0;
    double predicted_slope = 0.0;
    double predicted_const = 0.0;
    double rel_err_const = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};

/// Least squares of ln(M_t / L(t)) against ln t on [t_lo, t_hi]. With a kernel, L is its
/// slowly varying part and the predictions are rho - 1 and norm / Gamma(rho + 1); otherwise
/// L = 1 and the predictions are NaN. Error(Shape) with fewer than 8 points in the window.
AsymptoticFitReport fit_regular_variation(const TimeSeries& series, std::pair<double, double> window,
                                          const KernelSpec* kernel = nullptr,
                                          std::optional<double> norm = std::nullopt);

/// Top 1.5 decades of the grid.
std::pair<double, double> default_fit_window(const TimeSeries& series);

/// Per-mode check of D^(k) g + mu g = 0 for g(t) = int exp(-tau mu) G_t(tau) dtau on the
/// uniform grid t_j = j t_end / steps. D^(k) g = d/dt int_0^t k(t - s)(g(s) - g(0)) ds is
/// discretised by product integration (g piecewise linear) and centred differences.
struct ModeResidual {
    TimeSeries g;
    TimeSeries residual;   ///< (D^(k) g + mu g) / (mu g) on [t_eval_lo, t_end)
    double max_rel = 0.0;
    double step = 0.0;
};

ModeResidual fde_mode_residual(const KernelSpec& kernel, double opsymbol, double t_end, std::size_t steps,
                               double t_eval_lo = 0.1);

struct RefinementStudy {
    std::vector<std::size_t> steps;
    std::vector<double> max_rel;
    std::vector<double> orders;  ///< log2 of successive residual ratios
    bool monotone = false;
};

/// Residuals at steps, 2 steps, ..., 2^levels steps; g is evaluated once on the finest grid.
RefinementStudy fde_refinement_study(const KernelSpec& kernel, double opsymbol, double t_end,
                                     std::size_t base_steps, int levels, double t_eval_lo = 0.1);

/// Flat CSV row with header line; human-readable block.
void write_csv(const AsymptoticFitReport& report, std::ostream& os);
void write_text(const AsymptoticFitReport& report, std::ostream& os);

/// `t,value[,value_alt_route]`, 17 significant digits.
void write_csv(const CesaroSeries& series, std::ostream& os);
void write_csv(const TimeSeries& series, std::ostream& os);

}  // namespace subdiff
