// End-to-end acceptance run: one PASS/FAIL line per criterion, details indented above it.
// Oracles are computed here from closed forms and Boost quadrature, not from library output.

#include "subdiff/asymptotics.hpp"
#include "subdiff/invsub.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/pdesol.hpp"
#include "subdiff/specfun.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#ifndef SUBDIFF_CLI_PATH
#error "SUBDIFF_CLI_PATH must name the subdiff executable"
#endif

using namespace subdiff;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void detail(const char* fmt, auto... args) {
    std::printf("    ");
    std::printf(fmt, args...);
    std::printf("\n");
    std::fflush(stdout);
}

void verdict(int id, bool ok, const std::string& what) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Least-squares slope of ln y against ln t.
double loglog_slope(const std::vector<double>& t, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double x = std::log(t[i]);
        const double v = std::log(y[i]);
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> decade_grid(double lo, double hi, int per_decade) {
    std::vector<double> out;
    const int n = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
    for (int i = 0; i <= n; ++i) out.push_back(lo * std::pow(10.0, static_cast<double>(i) / per_decade));
    return out;
}

ProblemSpec base_local() {
    ProblemSpec p;
    p.N = 1;
    p.alpha = 1.0;
    p.gamma = 2.0;
    p.phi = InitialDatum::gaussian(1.0);
    return p;
}

// Cesaro series of v^E on [1e3, 1e5], 10 points per decade.
TimeSeries cesaro_series(const VProfile& v, const KernelSpec& k) {
    const DensityEvaluator ev(k);
    CesaroOptions opts;
    opts.alt_route = false;
    return cesaro_mean_vE(v, ev, decade_grid(1e3, 1e5, 10), opts).mean;
}

void criterion1(const VProfile& v, double norm) {
    bool ok = true;
    for (double theta : {0.3, 0.5, 0.7}) {
        const auto t0 = std::chrono::steady_clock::now();
        const TimeSeries s = cesaro_series(v, KernelSpec::stable(theta));
        const double slope = loglog_slope(s.t_values, s.values);
        const double t = s.t_values.back();
        const double ratio = std::tgamma(2.0 - theta) * std::pow(t, theta) * s.values.back() / norm;
        const bool pass = std::abs(slope + theta) <= 0.05 && ratio >= 0.95 && ratio <= 1.05;
        detail("theta=%.1f slope %.4f (target %.1f +- 0.05), Gamma(2-theta) t^theta M_t/||v||_1 at 1e5 = %.4f, %.1f s",
               theta, slope, -theta, ratio, seconds_since(t0));
        ok = ok && pass;
    }
    verdict(1, ok, "C1 slope -theta +- 0.05 and constant ratio in [0.95, 1.05] at t=1e5, theta in {0.3, 0.5, 0.7}");
}

void criterion2(const VProfile& v, double norm) {
    struct Case {
        const char* name;
        KernelSpec kernel;
        double constant;
        std::function<double(double)> L;  // K(1/t) = t^rho L(t), rho = 0
    };
    const double a = 1.0, b = 1.0, beta = 1.0, theta = 0.5;
    const std::vector<Case> cases = {
        {"Gamma(1,1)", KernelSpec::gamma(a, b), a / b * norm, [=](double t) { return a * t * std::log1p(1.0 / (b * t)); }},
        {"TemperedStable(1,0.5)", KernelSpec::tempered_stable(beta, theta), theta * std::pow(beta, theta - 1.0) * norm,
         [=](double t) { return (std::pow(1.0 / t + beta, theta) - std::pow(beta, theta)) * t; }},
    };
    bool ok = true;
    for (const Case& c : cases) {
        const auto t0 = std::chrono::steady_clock::now();
        const TimeSeries s = cesaro_series(v, c.kernel);
        std::vector<double> y(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) y[i] = s.values[i] / c.L(s.t_values[i]);
        const double slope = loglog_slope(s.t_values, y);
        const double ratio = s.t_values.back() * s.values.back() / c.constant;
        const bool pass = std::abs(slope + 1.0) <= 0.05 && std::abs(ratio - 1.0) <= 0.05;
        detail("%s slope %.4f (L divided out), t M_t / constant at 1e5 = %.4f, %.1f s", c.name, slope, ratio,
               seconds_since(t0));
        ok = ok && pass;
    }
    verdict(2, ok, "C4 (a=b=1) and C5 (beta=1, theta=0.5): slope -1 +- 0.05, constants within 5% at t=1e5");
}

void criterion3(const ProblemSpec& spec, const VProfile& v) {
    const double a = 1.0, b = 1.0;
    const double weighted = weighted_l1_norm(spec, 0.0, std::sqrt(a * b));
    const DensityEvaluator ev(KernelSpec::inverse_gamma(a, b));
    CesaroOptions opts;
    opts.alt_route = false;
    const double m = cesaro_mean_vE(v, ev, {1e4, 1e5}, opts).mean.values.back();
    const double target = 2.0 * std::sqrt(a * b) * weighted;
    detail("||v||_{1,1} = %.8f, M_t at 1e5 = %.8f, target 2 sqrt(ab) ||v||_{1,1} = %.8f, ratio %.4f", weighted, m, target,
           m / target);
    verdict(3, std::abs(m / target - 1.0) <= 0.05, "C3 (a=b=1) plateau at 2 ||v||_{1,1} within 5% at t=1e5");
}

void criterion4(const ProblemSpec& spec, double norm) {
    const KernelSpec k = KernelSpec::distributed_asymptotic(1.0, 1.0);
    const double lambda = 1e-4;
    const double w = laplace_side_w(spec, k, 0.0, lambda);
    detail("C=1, kappa=1: lambda w/K at 1e-4 = %.8f, ||v||_1 = %.8f, ratio %.4f (Phi(lambda) = %.4f)", w, norm, w / norm,
           laplace_exponent(k, lambda));
    verdict(4, std::abs(w / norm - 1.0) <= 0.01, "C2 Laplace side at lambda=1e-4 within 1% of ||v||_1");
}

double mass_oracle(const DensityEvaluator& ev, double t) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate([&](double tau) { return ev.density(t, tau); }, 1e-13);
}

void criterion5() {
    const DensityEvaluator half(KernelSpec::stable(0.5));
    const double pi = boost::math::constants::pi<double>();
    double worst = 0.0;
    std::size_t points = 0;
    for (double t : decade_grid(0.1, 100.0, 10)) {
        for (int j = 0; j <= 100; ++j) {
            const double tau = 0.1 * j;
            const double exact = std::exp(-tau * tau / (4.0 * t)) / std::sqrt(pi * t);
            worst = std::max(worst, std::abs(half.density(t, tau) - exact));
            ++points;
        }
    }
    detail("Stable(1/2) vs exp(-tau^2/(4t))/sqrt(pi t): max abs error %.3e over %zu points", worst, points);
    bool ok = worst <= 1e-6;

    const std::vector<std::pair<KernelSpec, double>> combos = {
        {KernelSpec::stable(0.3), 1.0},
        {KernelSpec::stable(0.7), 100.0},
        {KernelSpec::gamma(1.0, 1.0), 10.0},
        {KernelSpec::tempered_stable(1.0, 0.5), 100.0},
        {KernelSpec::stable(0.5), 10.0},
    };
    for (const auto& [k, t] : combos) {
        const DensityEvaluator ev(k);
        const double mass = mass_oracle(ev, t);
        detail("%s (%s), t=%g: int G_t dtau = %.10f", k.name().c_str(), k.class_label().c_str(), t, mass);
        ok = ok && std::abs(mass - 1.0) <= 1e-4;
    }
    verdict(5, ok, "Stable(1/2) round trip max abs error <= 1e-6; normalization 1 +- 1e-4 for five kernel/time pairs");
}

double line_mass(const std::function<double(double)>& f) {
    // Even integrand: 2 int_0^inf, split at 1 so the peak sits in the finite piece.
    const double core = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-13);
    boost::math::quadrature::exp_sinh<double> tail;
    return 2.0 * (core + tail.integrate([&](double x) { return f(1.0 + x); }, 1e-12));
}

void criterion6() {
    bool ok = true;
    for (double s : {0.25, 0.5, 0.75}) {
        const double m = line_mass([&](double x) { return mixed_kernel(x, 1.0, s); });
        detail("mixed kernel mass, t=1, s=%.2f: %.10f", s, m);
        ok = ok && std::abs(m - 1.0) <= 1e-4;
    }
    for (double alpha : {0.3, 0.6, 0.9}) {
        const double m = line_mass([&](double x) { return z_alpha_kernel(x, 1.0, alpha); });
        detail("Z_alpha mass, t=1, alpha=%.1f: %.10f", alpha, m);
        ok = ok && std::abs(m - 1.0) <= 1e-4;
    }

    struct Decay {
        double alpha, gamma, b, s, expected;
    };
    const std::vector<Decay> decays = {
        {1.0, 0.0, 0.0, 0.5, 0.5}, {0.6, 1.0, 0.0, 0.5, 0.6}, {1.0, 2.0, 0.0, 0.5, 1.5},
        {1.0, 0.0, 1.0, 0.5, 1.0}, {1.0, 0.0, 1.0, 0.75, 2.0 / 3.0}, {1.0, 2.0, 1.0, 0.5, 3.0},
    };
    const std::vector<double> ts = decade_grid(1e2, 1e4, 4);
    for (const Decay& d : decays) {
        ProblemSpec p;
        p.alpha = d.alpha;
        p.gamma = d.gamma;
        p.b = d.b;
        p.s = d.s;
        std::vector<double> sup;
        for (double t : ts) sup.push_back(solution_v(p, 0.0, t));
        const double slope = loglog_slope(ts, sup);
        detail("%s alpha=%.1f gamma=%.0f s=%.2f: slope of sup_x v %.4f (expected %.4f)", d.b > 0 ? "mixed" : "local",
               d.alpha, d.gamma, d.s, slope, -d.expected);
        ok = ok && std::abs(slope + d.expected) <= 0.05;
    }

    for (double s : {0.25, 0.5, 0.75}) {
        double lo = INFINITY, hi = 0.0;
        for (int i = 0; i <= 500; ++i) {
            const double x = 0.1 * i;
            const double r = fractional_profile(x, s) * std::pow(1.0 + x, 1.0 + 2.0 * s);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        detail("profile s=%.2f: K_s(x)(1+|x|)^(1+2s) in [%.4f, %.4f] on |x| <= 50", s, lo, hi);
        ok = ok && lo >= 0.05 && hi <= 20.0;
    }
    verdict(6, ok, "mass conservation to 1e-4, decay exponents within 0.05, profile ratio band [0.05, 20]");
}

void criterion7() {
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double z = -0.05 * i;
        worst = std::max(worst, std::abs(mittag_leffler(1.0, z) / std::exp(z) - 1.0));
    }
    detail("E_1(z) vs e^z on [-50, 0]: max relative error %.3e", worst);
    bool ok = worst <= 1e-10;

    const double e_half = mittag_leffler(0.5, -1.0);
    const double oracle = std::exp(1.0) * std::erfc(1.0);
    detail("E_1/2(-1) = %.12f, oracle e erfc(1) = %.12f, difference %.2e", e_half, oracle, std::abs(e_half - oracle));
    detail("listed value 0.4275835962 differs from the oracle by %.2e (transcription slip, not checked)",
           std::abs(0.4275835962 - oracle));
    ok = ok && std::abs(e_half - oracle) <= 1e-8;

    const double alpha = 0.5;
    std::vector<double> errs;
    std::string orders;
    double min_order = INFINITY;
    for (std::size_t n : {100u, 200u, 400u, 800u, 1600u}) {
        UniformSamples u;
        u.step = 1.0 / static_cast<double>(n);
        for (std::size_t j = 0; j <= n + 1; ++j)
            u.values.push_back(mittag_leffler(alpha, -std::pow(u.step * static_cast<double>(j), alpha)));
        const TimeSeries d = caputo_derivative_l1(u, alpha);
        double err = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k)
            if (std::abs(d.t_values[k] - 1.0) < 1e-12)
                err = std::abs(d.values[k] + mittag_leffler(alpha, -1.0));
        if (!errs.empty()) {
            const double order = std::log2(errs.back() / err);
            min_order = std::min(min_order, order);
            orders += " " + std::to_string(order).substr(0, 5);
        }
        errs.push_back(err);
        detail("L1 Caputo of E_1/2(-t^1/2) at t=1, n=%zu: residual %.3e", n, err);
    }
    detail("observed orders:%s", orders.c_str());
    ok = ok && min_order >= 1.0;
    verdict(7, ok, "E_1 = exp to 1e-10 on [-50, 0]; E_1/2(-1) to 1e-8; Caputo eigen-identity order >= 1");
}

void criterion8() {
    const auto t0 = std::chrono::steady_clock::now();
    const RefinementStudy r = fde_refinement_study(KernelSpec::stable(0.5), 1.0, 10.0, 400, 2, 0.1);
    for (std::size_t i = 0; i < r.steps.size(); ++i) detail("steps %zu: max relative residual %.3e", r.steps[i], r.max_rel[i]);
    detail("monotone: %s, %.1f s", r.monotone ? "yes" : "no", seconds_since(t0));
    verdict(8, r.monotone && r.max_rel.back() < 1e-3,
            "D^(k) mode residual for Stable(0.5), opsymbol 1: below 1e-3 after two refinements, monotone");
}

void criterion9(const fs::path& work) {
    bool ok = true;
    for (double theta : {0.3, 0.5, 0.7}) {
        const fs::path dir = work / ("mixed_theta_" + std::to_string(theta).substr(0, 3));
        fs::create_directories(dir);
        const fs::path cfg = dir / "config.toml";
        std::ofstream(cfg) << "seed = 20260101\n\n[kernel]\ntype = \"stable\"\ntheta = " << theta
                           << "\n\n[problem]\nN = 1\nalpha = 1\ngamma = 2\na = 1\nb = 1\ns = 0.5\ndatum = \"gaussian\"\n"
                              "width = 1\n\n[eval]\nx = 0\n\n[t_grid]\nt_min = 1e3\nt_max = 1e5\npoints_per_decade = 10\n";
        const auto t0 = std::chrono::steady_clock::now();
        const std::string cmd = std::string("\"") + SUBDIFF_CLI_PATH + "\" verify --config \"" + cfg.string() +
                                "\" --out \"" + (dir / "out").string() + "\" > \"" + (dir / "stdout.txt").string() +
                                "\" 2>&1";
        const int raw = std::system(cmd.c_str());
        const int code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        detail("theta=%.1f: verify exit code %d, %.1f s", theta, code, seconds_since(t0));
        std::ifstream out(dir / "stdout.txt");
        for (std::string line; std::getline(out, line);) detail("  %s", line.c_str());
        ok = ok && code == 0;
    }
    verdict(9, ok, "mixed case (N=1, gamma=2, s=0.5) end-to-end verify with C1 kernels exits 0");
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "subdiff_acceptance";
    const auto t0 = std::chrono::steady_clock::now();

    const ProblemSpec spec = base_local();
    const double norm = time_l1_norm(spec, 0.0).value;
    const VProfile v = VProfile::from_spec(spec, 0.0);
    std::printf("base spec N=1 alpha=1 gamma=2 Gaussian(1), x=0: ||v||_1 = %.10f\n", norm);

    criterion1(v, norm);
    criterion2(v, norm);
    criterion3(spec, v);
    criterion4(spec, norm);
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9(work);

    std::printf("%d of 9 criteria failed, %.1f s total\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
