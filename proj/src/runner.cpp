#include "subdiff/runner.hpp"

#include "subdiff/asymptotics.hpp"
#include "subdiff/error.hpp"
#include "subdiff/invsub.hpp"
#include "subdiff/parallel.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace subdiff {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifest = "run.manifest.txt";

struct Output {
    std::string name;
    std::string content;
};

std::ostringstream csv_stream() {
    std::ostringstream os;
    os << std::setprecision(17);
    return os;
}

const KernelSpec& need_kernel(const ExperimentConfig& cfg) {
    if (!cfg.kernel) fail(ErrorCode::Parse, cfg.source + ": [kernel] section is required");
    return *cfg.kernel;
}

const LogGridSpec& need_t_grid(const ExperimentConfig& cfg) {
    if (!cfg.t_grid) fail(ErrorCode::Parse, cfg.source + ": [t_grid] section is required");
    return *cfg.t_grid;
}

const ProblemSpec& need_problem(const ExperimentConfig& cfg, const char* command) {
    if (cfg.synthetic_v)
        fail(ErrorCode::Unsupported, std::string(command) + ": needs a PDE problem, not a synthetic v table");
    if (!cfg.problem) fail(ErrorCode::Parse, cfg.source + ": [problem] section is required");
    return *cfg.problem;
}

Check make_check(std::string name, double value, double target, double tol) {
    const double rel = target != 0.0 ? std::abs(value / target - 1.0) : std::abs(value);
    return Check{std::move(name), value, target, tol, std::isfinite(value) && rel <= tol};
}

Check abs_check(std::string name, double value, double target, double tol) {
    return Check{std::move(name), value, target, tol, std::isfinite(value) && std::abs(value - target) <= tol};
}

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

std::vector<Output> kernel_eval(const ExperimentConfig& cfg, RunResult&) {
    const KernelSpec& kernel = need_kernel(cfg);
    if (!cfg.lambda_grid) fail(ErrorCode::Parse, cfg.source + ": [lambda_grid] section is required");
    const std::vector<double> lambdas = cfg.lambda_grid->values();
    const RegularVariationData rv = regular_variation_data(kernel);
    auto os = csv_stream();
    os << "lambda,K,Phi,rho,x,L\n";
    for (double lambda : lambdas) {
        const double K = laplace_K(kernel, lambda);
        const double x = 1.0 / lambda;
        os << lambda << ',' << K << ',' << lambda * K << ',' << rv.rho << ',' << x << ',' << rv.L(x) << '\n';
    }
    return {{"kernel.csv", os.str()}};
}

std::vector<Output> density(const ExperimentConfig& cfg, RunResult& result) {
    const DensityEvaluator ev(need_kernel(cfg));
    const std::vector<double> ts = need_t_grid(cfg).values();
    if (cfg.tau_values.empty()) fail(ErrorCode::Parse, cfg.source + ": [tau_grid] section is required");

    const DensityGrid grid = fill_density_grid(ev, ts, cfg.tau_values, GridOptions{true, cfg.tol.cross_check});
    std::vector<MassCheck> mass(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) { mass[i] = density_mass(ev, ts[i]); });

    std::ostringstream dens;
    write_csv(grid, dens);
    auto norm = csv_stream();
    norm << "t,mass,tail_bound,tau_max\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        norm << ts[i] << ',' << mass[i].mass << ',' << mass[i].tail_bound << ',' << mass[i].tau_max << '\n';
        worst = std::max(worst, std::abs(mass[i].mass - 1.0));
    }

    std::size_t flagged = 0;
    std::size_t clamped = 0;
    for (auto f : grid.flagged) flagged += f;
    for (auto c : grid.clamped) clamped += c;
    if (flagged)
        result.warnings.push_back(std::to_string(flagged) + " grid points disagree with the Gaver-Stehfest cross-check by more than " +
                                  num(cfg.tol.cross_check));
    if (clamped) result.warnings.push_back(std::to_string(clamped) + " negative inversion values clamped to 0");
    if (worst > cfg.tol.mass)
        fail(ErrorCode::Accuracy, "density: normalization off by " + num(worst) + " (tolerance " + num(cfg.tol.mass) + ")",
             worst);
    result.summary += "max |mass - 1| = " + num(worst) + "\n";
    return {{"density.csv", dens.str()}, {"normalization.csv", norm.str()}};
}

std::vector<Output> solve(const ExperimentConfig& cfg, RunResult& result) {
    const ProblemSpec& spec = need_problem(cfg, "solve");
    const std::vector<double> ts = need_t_grid(cfg).values();
    const std::vector<double> xs = cfg.x_values.empty() ? std::vector<double>{cfg.x_eval} : cfg.x_values;

    std::vector<SolutionRow> rows(xs.size() * ts.size());
    parallel_for(rows.size(), [&](std::size_t k) {
        const double x = xs[k / ts.size()];
        const double t = ts[k % ts.size()];
        rows[k] = SolutionRow{x, t, solution_v(spec, x, t)};
    });
    std::ostringstream sol;
    write_csv(rows, sol);
    std::vector<Output> out{{"solution.csv", sol.str()}};

    if (spec.integrable()) {
        std::vector<NormEstimate> norms(xs.size());
        parallel_for(xs.size(), [&](std::size_t i) { norms[i] = time_l1_norm(spec, xs[i]); });
        auto os = csv_stream();
        os << "x,l1_norm,tail,horizon\n";
        for (std::size_t i = 0; i < xs.size(); ++i)
            os << xs[i] << ',' << norms[i].value << ',' << norms[i].tail << ',' << norms[i].horizon << '\n';
        out.push_back({"norm.csv", os.str()});
    } else {
        result.warnings.push_back("v(x, .) is not integrable in time (decay exponent " + num(spec.decay_exponent()) +
                                  " <= 1); norm.csv not written");
    }
    return out;
}

CesaroSeries cesaro_series(const ExperimentConfig& cfg, const VProfile& v, const DensityEvaluator& ev,
                           RunResult& result) {
    CesaroOptions opts;
    opts.alt_route = cfg.verify.alt_route;
    opts.warn_discrepancy = cfg.tol.route;
    CesaroSeries s = cesaro_mean_vE(v, ev, need_t_grid(cfg).values(), opts);
    if (!s.warning.empty()) result.warnings.push_back(s.warning);
    return s;
}

std::vector<Output> cesaro(const ExperimentConfig& cfg, RunResult& result) {
    const DensityEvaluator ev(need_kernel(cfg));
    const CesaroSeries s = cesaro_series(cfg, cfg.profile(), ev, result);
    std::ostringstream os;
    write_csv(s, os);
    if (!s.alt.empty()) result.summary += "max route discrepancy = " + num(s.max_discrepancy) + "\n";
    return {{"cesaro.csv", os.str()}};
}

// Class C3 with a > 0: Phi(0+) = sqrt(ab), so E_t stays bounded.
bool killed(const KernelSpec& k) {
    const auto* ig = std::get_if<kernel::InverseGamma>(&k.variant());
    return ig && ig->a > 0.0;
}

// ||v||_1, or the weighted norm at sqrt(ab) for class C3.
double reference_norm(const ExperimentConfig& cfg, const VProfile& v) {
    const KernelSpec& kernel = *cfg.kernel;
    double ell = 0.0;
    if (const auto* k = std::get_if<kernel::InverseGamma>(&kernel.variant())) ell = std::sqrt(k->a * k->b);
    if (cfg.problem && !cfg.synthetic_v) {
        if (ell > 0.0) return weighted_l1_norm(*cfg.problem, cfg.x_eval, ell);
        return time_l1_norm(*cfg.problem, cfg.x_eval).value;
    }
    return v.laplace(ell);
}

void check_integrable(const ExperimentConfig& cfg) {
    if (killed(*cfg.kernel) || !cfg.problem || cfg.synthetic_v) return;
    const ProblemSpec& p = *cfg.problem;
    if (!p.integrable())
        fail(ErrorCode::Divergence, "verify: v(x, .) is not integrable in time (decay exponent " + num(p.decay_exponent()) +
                                        " <= 1), so ||v||_1 is infinite");
}

// Fit of a seeded synthetic series with the predicted shape and 0.2% multiplicative noise.
Check noisy_fit_selftest(const ExperimentConfig& cfg, const TimeSeries& shape_grid, std::pair<double, double> window,
                         double norm) {
    const KernelSpec& kernel = *cfg.kernel;
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> noise(0.0, 2e-3);
    TimeSeries synth;
    synth.t_values = shape_grid.t_values;
    for (double t : synth.t_values) synth.values.push_back(generic_asymptote(kernel, norm, t) * (1.0 + noise(rng)));
    const AsymptoticFitReport r = fit_regular_variation(synth, window, &kernel, norm);
    return abs_check("selftest_noisy_slope", r.slope_hat, r.predicted_slope, cfg.tol.slope);
}

std::string checks_csv(const std::vector<Check>& checks) {
    auto os = csv_stream();
    os << "check,value,target,tolerance,passed\n";
    for (const Check& c : checks)
        os << c.name << ',' << c.value << ',' << c.target << ',' << c.tolerance << ',' << (c.passed ? 1 : 0) << '\n';
    return os.str();
}

std::vector<Output> verify_laplace_only(const ExperimentConfig& cfg, const VProfile& v, RunResult& result) {
    const KernelSpec& kernel = *cfg.kernel;
    const double lambda = cfg.verify.lambda;
    const double norm = reference_norm(cfg, v);
    const double w = cfg.problem && !cfg.synthetic_v ? laplace_side_w(*cfg.problem, kernel, cfg.x_eval, lambda)
                                                      : laplace_side_w(v, kernel, lambda);
    result.checks.push_back(make_check("laplace_side", w, norm, cfg.tol.laplace));
    std::ostringstream txt;
    txt << std::setprecision(10) << "kernel           " << kernel.name() << " (" << kernel.class_label() << ")\n"
        << "lambda           " << lambda << "\n"
        << "lambda w / K     " << w << "\n"
        << "||v||_1          " << norm << "\n"
        << "ratio            " << w / norm << "\n"
        << "time-domain fit  not available for this class (no density inversion)\n";
    return {{"report.txt", txt.str()}, {"checks.csv", checks_csv(result.checks)}};
}

std::vector<Output> verify(const ExperimentConfig& cfg, RunResult& result) {
    const KernelSpec& kernel = need_kernel(cfg);
    check_integrable(cfg);
    const VProfile v = cfg.profile();
    if (!supports_inversion(kernel)) return verify_laplace_only(cfg, v, result);

    const double norm = reference_norm(cfg, v);
    const DensityEvaluator ev(kernel);
    const CesaroSeries s = cesaro_series(cfg, v, ev, result);

    std::pair<double, double> window = default_fit_window(s.mean);
    if (cfg.verify.fit_t_lo) window.first = *cfg.verify.fit_t_lo;
    if (cfg.verify.fit_t_hi) window.second = *cfg.verify.fit_t_hi;
    const AsymptoticFitReport fit = fit_regular_variation(s.mean, window, &kernel, norm);

    const double t_check = cfg.verify.t_check.value_or(s.mean.t_values.back());
    double m_check = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < s.mean.size(); ++i)
        if (std::abs(s.mean.t_values[i] / t_check - 1.0) < 1e-12) m_check = s.mean.values[i];
    if (std::isnan(m_check)) {
        CesaroOptions single;
        single.alt_route = false;
        m_check = cesaro_mean_vE(v, ev, {t_check}, single).mean.values.front();
    }

    const double predicted = predicted_asymptote(kernel, norm, t_check);
    const double t_side = m_check * norm / generic_asymptote(kernel, norm, t_check);
    const double l_side = laplace_side_w(v, kernel, 1.0 / t_check);

    auto& checks = result.checks;
    checks.push_back(abs_check("slope", fit.slope_hat, fit.predicted_slope, cfg.tol.slope));
    checks.push_back(make_check("constant_at_t_check", m_check, predicted, cfg.tol.constant));
    if (!s.alt.empty()) checks.push_back(abs_check("route_discrepancy", s.max_discrepancy, 0.0, cfg.tol.route));
    checks.push_back(make_check("tauberian", t_side, l_side, cfg.tol.tauberian));
    checks.push_back(noisy_fit_selftest(cfg, s.mean, window, norm));

    std::ostringstream csv;
    write_csv(fit, csv);
    std::ostringstream txt;
    txt << std::setprecision(10) << "kernel           " << kernel.name() << " (" << kernel.class_label() << ")\n"
        << "v profile        " << v.label() << ", tail exponent " << v.tail_exponent() << "\n"
        << "norm             " << norm << (killed(kernel) ? " (weighted)\n" : "\n");
    write_text(fit, txt);
    txt << "t_check          " << t_check << "\n"
        << "M_t at t_check   " << m_check << " (predicted " << predicted << ", ratio " << m_check / predicted << ")\n"
        << "Tauberian        t side " << t_side << ", Laplace side " << l_side << "\n";
    if (!s.alt.empty()) txt << "route discrepancy " << s.max_discrepancy << "\n";
    txt << "tolerances are engineering choices; the limit theorem gives no convergence rate\n";
    std::ostringstream series;
    write_csv(s, series);
    return {{"report.csv", csv.str()},
            {"report.txt", txt.str()},
            {"series.csv", series.str()},
            {"checks.csv", checks_csv(checks)}};
}

std::string manifest(const std::string& command, const std::string& status, const std::vector<std::string>& outputs,
                     const std::vector<std::string>& warnings, const std::string& config_echo) {
    std::ostringstream os;
    os << "# subdiff run manifest\n"
       << "command = \"" << command << "\"\n"
       << "version = \"" << SUBDIFF_VERSION_STRING << "\"\n"
       << "status = \"" << status << "\"\n"
       << "outputs = [";
    for (std::size_t i = 0; i < outputs.size(); ++i) os << (i ? ", " : "") << '"' << outputs[i] << '"';
    os << "]\n";
    for (const std::string& w : warnings) os << (status == "error" ? "# error: " : "# warning: ") << w << "\n";
    os << "\n# resolved configuration\n" << config_echo;
    return os.str();
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) fail(ErrorCode::Io, "cannot create output directory '" + dir.string() + "'");
}

}  // namespace

bool RunResult::passed() const {
    for (const Check& c : checks)
        if (!c.passed) return false;
    return true;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"kernel-eval", "density", "solve", "cesaro", "verify"};
    return names;
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) fail(ErrorCode::Io, "write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorCode::Io, "cannot move output into place at '" + path.string() + "'");
    }
}

void write_failure_manifest(const std::string& command, const std::string& config_text, const fs::path& out_dir,
                            const std::string& message) {
    ensure_dir(out_dir);
    write_atomic(out_dir / kManifest, manifest(command, "error", {}, {message}, config_text));
}

RunResult run_command(const std::string& command, const ExperimentConfig& cfg, const fs::path& out_dir) {
    using Fn = std::vector<Output> (*)(const ExperimentConfig&, RunResult&);
    Fn fn = nullptr;
    if (command == "kernel-eval") fn = kernel_eval;
    if (command == "density") fn = density;
    if (command == "solve") fn = solve;
    if (command == "cesaro") fn = cesaro;
    if (command == "verify") fn = verify;
    if (!fn) fail(ErrorCode::Parse, "unknown command '" + command + "'");

    RunResult result;
    const std::vector<Output> outputs = fn(cfg, result);
    ensure_dir(out_dir);
    for (const Output& o : outputs) {
        write_atomic(out_dir / o.name, o.content);
        result.outputs.push_back(o.name);
    }
    for (const Check& c : result.checks)
        result.summary += (c.passed ? "PASS " : "FAIL ") + c.name + ": value " + num(c.value) + ", target " +
                          num(c.target) + ", tolerance " + num(c.tolerance) + "\n";
    const std::string status = result.passed() ? "ok" : "checks_failed";
    write_atomic(out_dir / kManifest, manifest(command, status, result.outputs, result.warnings, cfg.echo()));
    result.outputs.push_back(kManifest);
    for (const std::string& w : result.warnings) result.summary += "warning: " + w + "\n";
    return result;
}

}  // namespace subdiff
