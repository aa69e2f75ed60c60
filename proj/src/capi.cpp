#include "subdiff/subdiff.h"

#include "subdiff/asymptotics.hpp"
#include "subdiff/config.hpp"
#include "subdiff/error.hpp"
#include "subdiff/invsub.hpp"
#include "subdiff/runner.hpp"
#include "subdiff/specfun.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>

struct subdiff_config {
    subdiff::ExperimentConfig cfg;
};

struct subdiff_kernel {
    subdiff::KernelSpec spec;
};

struct subdiff_density {
    subdiff::DensityEvaluator ev;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_summary;

subdiff_status from_code(subdiff::ErrorCode code) {
    switch (code) {
        case subdiff::ErrorCode::Domain: return SUBDIFF_ERR_DOMAIN;
        case subdiff::ErrorCode::Accuracy: return SUBDIFF_ERR_ACCURACY;
        case subdiff::ErrorCode::Unsupported: return SUBDIFF_ERR_UNSUPPORTED;
        case subdiff::ErrorCode::Divergence: return SUBDIFF_ERR_DIVERGENCE;
        case subdiff::ErrorCode::Parse: return SUBDIFF_ERR_PARSE;
        case subdiff::ErrorCode::Shape: return SUBDIFF_ERR_SHAPE;
        case subdiff::ErrorCode::Io: return SUBDIFF_ERR_IO;
    }
    return SUBDIFF_ERR_INTERNAL;
}

// Runs f, translating exceptions into a status and the thread-local message.
template <class F>
subdiff_status guarded(F&& f) {
    try {
        last_error.clear();
        return f();
    } catch (const subdiff::Error& e) {
        last_error = e.what();
        return from_code(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown error";
    }
    return SUBDIFF_ERR_INTERNAL;
}

subdiff_status invalid(const char* what) {
    last_error = what;
    return SUBDIFF_ERR_INVALID_ARGUMENT;
}

#define SUBDIFF_REQUIRE(cond, msg) \
    if (!(cond)) return invalid(msg)

const subdiff::ProblemSpec& problem_of(const subdiff_config* c) {
    if (!c->cfg.problem) subdiff::fail(subdiff::ErrorCode::Parse, c->cfg.source + ": [problem] section is required");
    return *c->cfg.problem;
}

}  // namespace

extern "C" {

const char* subdiff_version(void) { return SUBDIFF_VERSION_STRING; }

const char* subdiff_status_name(subdiff_status status) {
    switch (status) {
        case SUBDIFF_OK: return "ok";
        case SUBDIFF_ERR_DOMAIN: return "domain";
        case SUBDIFF_ERR_ACCURACY: return "accuracy";
        case SUBDIFF_ERR_UNSUPPORTED: return "unsupported";
        case SUBDIFF_ERR_DIVERGENCE: return "divergence";
        case SUBDIFF_ERR_PARSE: return "parse";
        case SUBDIFF_ERR_SHAPE: return "shape";
        case SUBDIFF_ERR_IO: return "io";
        case SUBDIFF_ERR_CHECK_FAILED: return "check_failed";
        case SUBDIFF_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case SUBDIFF_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* subdiff_last_error(void) { return last_error.c_str(); }
const char* subdiff_last_summary(void) { return last_summary.c_str(); }

int subdiff_exit_code(subdiff_status status) {
    switch (status) {
        case SUBDIFF_OK: return 0;
        case SUBDIFF_ERR_ACCURACY:
        case SUBDIFF_ERR_CHECK_FAILED:
        case SUBDIFF_ERR_INTERNAL: return 1;
        default: return 2;
    }
}

subdiff_status subdiff_gamma(double x, double* out) {
    SUBDIFF_REQUIRE(out, "null output pointer");
    return guarded([&] {
        *out = subdiff::gamma_fn(x);
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_upper_incomplete_gamma(double nu, double x, double* out) {
    SUBDIFF_REQUIRE(out, "null output pointer");
    return guarded([&] {
        *out = subdiff::upper_incomplete_gamma(nu, x);
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_mittag_leffler(double alpha, double z, double* out) {
    SUBDIFF_REQUIRE(out, "null output pointer");
    return guarded([&] {
        *out = subdiff::mittag_leffler(alpha, z);
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_config_load(const char* path, subdiff_config** out) {
    SUBDIFF_REQUIRE(path && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new subdiff_config{subdiff::load_config(path)};
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_config_parse(const char* text, const char* base_dir, subdiff_config** out) {
    SUBDIFF_REQUIRE(text && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new subdiff_config{subdiff::parse_config(text, base_dir ? base_dir : "")};
        return SUBDIFF_OK;
    });
}

void subdiff_config_free(subdiff_config* cfg) { delete cfg; }

subdiff_status subdiff_config_echo(const subdiff_config* cfg, char* buf, size_t capacity, size_t* needed) {
    SUBDIFF_REQUIRE(cfg, "null config");
    return guarded([&] {
        const std::string text = cfg->cfg.echo();
        if (needed) *needed = text.size() + 1;
        if (buf && capacity > 0) {
            const std::size_t n = std::min(capacity - 1, text.size());
            std::memcpy(buf, text.data(), n);
            buf[n] = '\0';
        }
        if (buf && capacity < text.size() + 1) {
            last_error = "buffer too small";
            return SUBDIFF_ERR_SHAPE;
        }
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_kernel_create(const char* type, const double* params, size_t n, subdiff_kernel** out) {
    SUBDIFF_REQUIRE(type && out, "null argument");
    SUBDIFF_REQUIRE(params || n == 0, "null parameter array");
    *out = nullptr;
    return guarded([&] {
        using subdiff::KernelSpec;
        const std::string t = type;
        auto need = [&](std::size_t k) {
            if (n != k)
                subdiff::fail(subdiff::ErrorCode::Shape,
                              "kernel '" + t + "' takes " + std::to_string(k) + " parameters, got " + std::to_string(n));
        };
        std::optional<KernelSpec> spec;
        if (t == "stable") {
            need(1);
            spec = KernelSpec::stable(params[0]);
        } else if (t == "distributed_asymptotic") {
            need(2);
            spec = KernelSpec::distributed_asymptotic(params[0], params[1]);
        } else if (t == "inverse_gamma") {
            need(2);
            spec = KernelSpec::inverse_gamma(params[0], params[1]);
        } else if (t == "gamma") {
            need(2);
            spec = KernelSpec::gamma(params[0], params[1]);
        } else if (t == "tempered_stable") {
            need(2);
            spec = KernelSpec::tempered_stable(params[0], params[1]);
        } else if (t == "distributed_mu") {
            if (n == 0 || n % 2) subdiff::fail(subdiff::ErrorCode::Shape, "distributed_mu needs 2m parameters");
            spec = KernelSpec::distributed_mu({params, params + n / 2}, {params + n / 2, params + n});
        } else {
            last_error = "unknown kernel type '" + t + "'";
            return SUBDIFF_ERR_INVALID_ARGUMENT;
        }
        *out = new subdiff_kernel{std::move(*spec)};
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_kernel_from_config(const subdiff_config* cfg, subdiff_kernel** out) {
    SUBDIFF_REQUIRE(cfg && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        if (!cfg->cfg.kernel) subdiff::fail(subdiff::ErrorCode::Parse, cfg->cfg.source + ": [kernel] section is required");
        *out = new subdiff_kernel{*cfg->cfg.kernel};
        return SUBDIFF_OK;
    });
}

void subdiff_kernel_free(subdiff_kernel* k) { delete k; }

subdiff_status subdiff_kernel_laplace(const subdiff_kernel* k, double lambda, double* K, double* Phi) {
    SUBDIFF_REQUIRE(k, "null kernel");
    return guarded([&] {
        const double value = subdiff::laplace_K(k->spec, lambda);
        if (K) *K = value;
        if (Phi) *Phi = subdiff::laplace_exponent(k->spec, lambda);
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_kernel_time_domain(const subdiff_kernel* k, double t, double* out) {
    SUBDIFF_REQUIRE(k && out, "null argument");
    return guarded([&] {
        *out = subdiff::kernel_time_domain(k->spec, t);
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_kernel_regular_variation(const subdiff_kernel* k, double x, double* rho, double* L) {
    SUBDIFF_REQUIRE(k, "null kernel");
    return guarded([&] {
        const subdiff::RegularVariationData rv = subdiff::regular_variation_data(k->spec);
        if (rho) *rho = rv.rho;
        if (L) *L = rv.L(x);
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_predicted_asymptote(const subdiff_kernel* k, double norm, double t, double* out) {
    SUBDIFF_REQUIRE(k && out, "null argument");
    return guarded([&] {
        *out = subdiff::predicted_asymptote(k->spec, norm, t);
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_density_create(const subdiff_kernel* k, subdiff_density** out) {
    SUBDIFF_REQUIRE(k && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new subdiff_density{subdiff::DensityEvaluator(k->spec)};
        return SUBDIFF_OK;
    });
}

void subdiff_density_free(subdiff_density* d) { delete d; }

subdiff_status subdiff_density_eval(const subdiff_density* d, double t, double tau, double* value, double* err) {
    SUBDIFF_REQUIRE(d && value, "null argument");
    return guarded([&] {
        const subdiff::Estimate e = d->ev.density_with_error(t, tau);
        *value = e.value;
        if (err) *err = e.error;
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_density_cesaro(const subdiff_density* d, double t, double tau, double* value) {
    SUBDIFF_REQUIRE(d && value, "null argument");
    return guarded([&] {
        *value = d->ev.cesaro(t, tau);
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_density_mass(const subdiff_density* d, double t, double* mass, double* tail_bound,
                                    double* tau_max) {
    SUBDIFF_REQUIRE(d && mass, "null argument");
    return guarded([&] {
        const subdiff::MassCheck m = subdiff::density_mass(d->ev, t);
        *mass = m.mass;
        if (tail_bound) *tail_bound = m.tail_bound;
        if (tau_max) *tau_max = m.tau_max;
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_solution_v(const subdiff_config* cfg, double x, double t, double* out) {
    SUBDIFF_REQUIRE(cfg && out, "null argument");
    return guarded([&] {
        *out = subdiff::solution_v(problem_of(cfg), x, t);
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_time_l1_norm(const subdiff_config* cfg, double x, double* out) {
    SUBDIFF_REQUIRE(cfg && out, "null argument");
    return guarded([&] {
        *out = subdiff::time_l1_norm(problem_of(cfg), x).value;
        return SUBDIFF_OK;
    });
}

subdiff_status subdiff_cmd_run(const char* command, const char* config_path, const char* out_dir) {
    SUBDIFF_REQUIRE(command && config_path && out_dir, "null argument");
    last_summary.clear();
    const auto& names = subdiff::command_names();
    if (std::find(names.begin(), names.end(), command) == names.end()) {
        last_error = std::string("unknown command '") + command + "'";
        return SUBDIFF_ERR_INVALID_ARGUMENT;
    }
    std::string config_text;
    const subdiff_status st = guarded([&] {
        const subdiff::ExperimentConfig cfg = subdiff::load_config(config_path);
        config_text = cfg.echo();
        const subdiff::RunResult r = subdiff::run_command(command, cfg, out_dir);
        last_summary = r.summary;
        if (!r.passed()) {
            last_error = "verification failed: one or more checks exceeded their tolerance";
            return SUBDIFF_ERR_CHECK_FAILED;
        }
        return SUBDIFF_OK;
    });
    if (st != SUBDIFF_OK && st != SUBDIFF_ERR_CHECK_FAILED) {
        // Record the failure next to where outputs would have gone; the original error wins.
        const std::string message = last_error;
        try {
            if (config_text.empty()) {
                std::ifstream in(config_path);
                std::ostringstream raw;
                if (in) raw << in.rdbuf();
                std::istringstream lines(raw.str());
                for (std::string line; std::getline(lines, line);) config_text += "# " + line + "\n";
            }
            subdiff::write_failure_manifest(command, config_text, out_dir, message);
        } catch (...) {
        }
        last_error = message;
    }
    return st;
}

}  // extern "C"
