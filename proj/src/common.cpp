#include "subdiff/error.hpp"
#include "subdiff/parallel.hpp"
#include "subdiff/quadrature.hpp"
#include "subdiff/series.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <cstdlib>
#include <string>

namespace subdiff {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Domain: return "domain error";
        case ErrorCode::Accuracy: return "accuracy error";
        case ErrorCode::Unsupported: return "unsupported";
        case ErrorCode::Divergence: return "divergence error";
        case ErrorCode::Parse: return "parse error";
        case ErrorCode::Shape: return "shape error";
        case ErrorCode::Io: return "i/o error";
    }
    return "error";
}

unsigned worker_count() noexcept {
    if (const char* env = std::getenv("SUBDIFF_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

std::vector<double> log_grid(double t_min, double t_max, int points_per_decade) {
    if (!(t_min > 0.0) || !(t_max > t_min)) fail(ErrorCode::Domain, "log_grid: need 0 < t_min < t_max");
    if (points_per_decade < 1) fail(ErrorCode::Domain, "log_grid: points_per_decade must be >= 1");
    const double decades = std::log10(t_max / t_min);
    const int n = std::max(2, static_cast<int>(std::lround(decades * points_per_decade)) + 1);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = t_min * std::pow(10.0, decades * i / (n - 1));
    out.front() = t_min;
    out.back() = t_max;
    return out;
}

void validate(const TimeSeries& series) {
    if (series.t_values.size() != series.values.size())
        fail(ErrorCode::Shape, "time series: t and value arrays differ in length");
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!(series.t_values[i] > 0.0)) fail(ErrorCode::Shape, "time series: t must be positive");
        if (i > 0 && !(series.t_values[i] > series.t_values[i - 1]))
            fail(ErrorCode::Shape, "time series: t must be strictly increasing");
        if (!std::isfinite(series.values[i])) fail(ErrorCode::Shape, "time series: non-finite value");
    }
}

namespace quad {

namespace {

template <int N>
Rule make_gauss() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    Rule r;
    // Boost stores the non-negative half; mirror it.
    for (std::size_t i = x.size(); i-- > 0;) {
        if (x[i] == 0.0) continue;
        r.nodes.push_back(-x[i]);
        r.weights.push_back(w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.nodes.push_back(x[i]);
        r.weights.push_back(w[i]);
    }
    return r;
}

}  // namespace

Rule gauss_legendre(int n) {
    switch (n) {
        case 8: return make_gauss<8>();
        case 16: return make_gauss<16>();
        case 32: return make_gauss<32>();
        case 64: return make_gauss<64>();
        default: fail(ErrorCode::Domain, "gauss_legendre: unsupported order " + std::to_string(n));
    }
}

Rule composite_gauss(double a, double b, int panels) {
    if (panels < 1) fail(ErrorCode::Domain, "composite_gauss: need at least one panel");
    static const Rule base = gauss_legendre(8);
    Rule r;
    r.nodes.reserve(panels * base.size());
    r.weights.reserve(panels * base.size());
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < base.size(); ++i) {
            r.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
            r.weights.push_back(0.5 * h * base.weights[i]);
        }
    }
    return r;
}

Rule log_gauss(double lo, double hi, double log_width) {
    if (!(lo > 0.0) || !(hi > lo)) fail(ErrorCode::Domain, "log_gauss: need 0 < lo < hi");
    const double ulo = std::log(lo);
    const double uhi = std::log(hi);
    const int panels = std::max(1, static_cast<int>(std::ceil((uhi - ulo) / log_width)));
    Rule r = composite_gauss(ulo, uhi, panels);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r.nodes[i] = std::exp(r.nodes[i]);
        r.weights[i] *= r.nodes[i];
    }
    return r;
}

}  // namespace quad
}  // namespace subdiff
