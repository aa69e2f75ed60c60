// Exercises the shared library through subdiff.h alone.
#include "subdiff/subdiff.h"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using doctest::Approx;
namespace fs = std::filesystem;

namespace {

const char* kConfig =
    "[kernel]\ntype = \"stable\"\ntheta = 0.5\n[problem]\ngamma = 2\n[t_grid]\nt_min = 1\nt_max = 10\n"
    "points_per_decade = 4\n[tau_grid]\nvalues = [0, 1]\n";

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(subdiff_version()) == "0.1.0");
    CHECK(std::string(subdiff_status_name(SUBDIFF_OK)) == "ok");
    CHECK(subdiff_exit_code(SUBDIFF_OK) == 0);
    CHECK(subdiff_exit_code(SUBDIFF_ERR_ACCURACY) == 1);
    CHECK(subdiff_exit_code(SUBDIFF_ERR_CHECK_FAILED) == 1);
    CHECK(subdiff_exit_code(SUBDIFF_ERR_INTERNAL) == 1);
    for (subdiff_status s : {SUBDIFF_ERR_DOMAIN, SUBDIFF_ERR_UNSUPPORTED, SUBDIFF_ERR_DIVERGENCE, SUBDIFF_ERR_PARSE,
                             SUBDIFF_ERR_SHAPE, SUBDIFF_ERR_IO, SUBDIFF_ERR_INVALID_ARGUMENT})
        CHECK(subdiff_exit_code(s) == 2);
}

TEST_CASE("special functions") {
    double v = 0.0;
    REQUIRE(subdiff_gamma(0.5, &v) == SUBDIFF_OK);
    CHECK(v == Approx(std::sqrt(std::acos(-1.0))).epsilon(1e-14));
    REQUIRE(subdiff_upper_incomplete_gamma(0.5, 0.25, &v) == SUBDIFF_OK);
    CHECK(v == Approx(std::sqrt(std::acos(-1.0)) * std::erfc(0.5)).epsilon(1e-13));
    REQUIRE(subdiff_mittag_leffler(0.5, -1.0, &v) == SUBDIFF_OK);
    CHECK(v == Approx(std::exp(1.0) * std::erfc(1.0)).epsilon(1e-13));
    CHECK(subdiff_gamma(-1.0, &v) == SUBDIFF_ERR_DOMAIN);
    CHECK(std::string(subdiff_last_error()).find("gamma") != std::string::npos);
    CHECK(subdiff_gamma(1.0, nullptr) == SUBDIFF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("kernels") {
    subdiff_kernel* k = nullptr;
    const double theta = 0.5;
    REQUIRE(subdiff_kernel_create("stable", &theta, 1, &k) == SUBDIFF_OK);
    double K = 0.0, Phi = 0.0, rho = 0.0, L = 0.0, kt = 0.0;
    REQUIRE(subdiff_kernel_laplace(k, 4.0, &K, &Phi) == SUBDIFF_OK);
    CHECK(K == Approx(0.5));
    CHECK(Phi == Approx(2.0));
    REQUIRE(subdiff_kernel_regular_variation(k, 10.0, &rho, &L) == SUBDIFF_OK);
    CHECK(rho == Approx(0.5));
    CHECK(L == Approx(1.0));
    REQUIRE(subdiff_kernel_time_domain(k, 1.0, &kt) == SUBDIFF_OK);
    CHECK(kt == Approx(1.0 / std::sqrt(std::acos(-1.0))));
    double pred = 0.0;
    REQUIRE(subdiff_predicted_asymptote(k, 1.0, 100.0, &pred) == SUBDIFF_OK);
    CHECK(pred == Approx(0.1128379167).epsilon(1e-9));
    CHECK(subdiff_kernel_laplace(k, -1.0, &K, &Phi) == SUBDIFF_ERR_DOMAIN);
    subdiff_kernel_free(k);

    const double mu[] = {0.0, 1.0, 1.0, 1.0};
    REQUIRE(subdiff_kernel_create("distributed_mu", mu, 4, &k) == SUBDIFF_OK);
    REQUIRE(subdiff_kernel_laplace(k, 1.0, &K, &Phi) == SUBDIFF_OK);
    CHECK(K == Approx(1.0).epsilon(1e-14));
    subdiff_kernel_free(k);

    const double c2[] = {1.0, 1.0};
    REQUIRE(subdiff_kernel_create("distributed_asymptotic", c2, 2, &k) == SUBDIFF_OK);
    CHECK(subdiff_kernel_laplace(k, 1.0, &K, &Phi) == SUBDIFF_ERR_UNSUPPORTED);
    subdiff_density* d = nullptr;
    CHECK(subdiff_density_create(k, &d) == SUBDIFF_ERR_UNSUPPORTED);
    CHECK(d == nullptr);
    subdiff_kernel_free(k);

    CHECK(subdiff_kernel_create("levy", &theta, 1, &k) == SUBDIFF_ERR_INVALID_ARGUMENT);
    CHECK(subdiff_kernel_create("stable", &theta, 2, &k) == SUBDIFF_ERR_SHAPE);
    const double bad = 1.5;
    CHECK(subdiff_kernel_create("stable", &bad, 1, &k) == SUBDIFF_ERR_DOMAIN);
    subdiff_kernel_free(nullptr);
}

TEST_CASE("densities") {
    subdiff_kernel* k = nullptr;
    const double theta = 0.5;
    REQUIRE(subdiff_kernel_create("stable", &theta, 1, &k) == SUBDIFF_OK);
    subdiff_density* d = nullptr;
    REQUIRE(subdiff_density_create(k, &d) == SUBDIFF_OK);
    subdiff_kernel_free(k);  // the density keeps its own copy
    double g = 0.0, err = 0.0, c = 0.0, mass = 0.0, tail = 0.0, tau_max = 0.0;
    REQUIRE(subdiff_density_eval(d, 1.0, 1.0, &g, &err) == SUBDIFF_OK);
    CHECK(g == Approx(std::exp(-0.25) / std::sqrt(std::acos(-1.0))).epsilon(1e-12));
    CHECK(err < 1e-10);
    REQUIRE(subdiff_density_cesaro(d, 1.0, 1.0, &c) == SUBDIFF_OK);
    CHECK(c == Approx(0.399282456748).epsilon(1e-10));
    REQUIRE(subdiff_density_mass(d, 10.0, &mass, &tail, &tau_max) == SUBDIFF_OK);
    CHECK(mass == Approx(1.0).epsilon(1e-10));
    CHECK(subdiff_density_eval(d, 0.0, 1.0, &g, &err) == SUBDIFF_ERR_DOMAIN);
    subdiff_density_free(d);
}

TEST_CASE("configurations and solutions") {
    subdiff_config* cfg = nullptr;
    REQUIRE(subdiff_config_parse(kConfig, nullptr, &cfg) == SUBDIFF_OK);
    size_t needed = 0;
    REQUIRE(subdiff_config_echo(cfg, nullptr, 0, &needed) == SUBDIFF_OK);
    std::vector<char> small(8);
    CHECK(subdiff_config_echo(cfg, small.data(), small.size(), &needed) == SUBDIFF_ERR_SHAPE);
    std::vector<char> buf(needed);
    REQUIRE(subdiff_config_echo(cfg, buf.data(), buf.size(), &needed) == SUBDIFF_OK);
    CHECK(std::string(buf.data()).find("theta = 0.5") != std::string::npos);

    double v = 0.0, norm = 0.0;
    REQUIRE(subdiff_solution_v(cfg, 0.0, 1.0, &v) == SUBDIFF_OK);
    // Gaussian(1) under the heat flow to internal time 1/3
    CHECK(v == Approx(1.0 / std::sqrt(2.0 * std::acos(-1.0) * (1.0 + 2.0 / 3.0))).epsilon(1e-8));
    REQUIRE(subdiff_time_l1_norm(cfg, 0.0, &norm) == SUBDIFF_OK);
    CHECK(norm > 0.0);
    subdiff_kernel* k = nullptr;
    REQUIRE(subdiff_kernel_from_config(cfg, &k) == SUBDIFF_OK);
    subdiff_kernel_free(k);
    subdiff_config_free(cfg);

    REQUIRE(subdiff_config_parse("[problem]\ngamma = 0\n", nullptr, &cfg) == SUBDIFF_OK);
    CHECK(subdiff_time_l1_norm(cfg, 0.0, &norm) == SUBDIFF_ERR_DIVERGENCE);
    CHECK(subdiff_kernel_from_config(cfg, &k) == SUBDIFF_ERR_PARSE);
    subdiff_config_free(cfg);

    CHECK(subdiff_config_parse("[kernel]\ntype = \"stable\"\n", nullptr, &cfg) == SUBDIFF_ERR_PARSE);
    CHECK(std::string(subdiff_last_error()).find("kernel.theta") != std::string::npos);
    CHECK(subdiff_config_load("/nonexistent/x.toml", &cfg) == SUBDIFF_ERR_IO);
}

TEST_CASE("commands") {
    const fs::path dir = fs::temp_directory_path() / "subdiff_test_capi";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "c.toml") << kConfig;
    const std::string cfg = (dir / "c.toml").string();
    const std::string out = (dir / "out").string();
    REQUIRE(subdiff_cmd_run("density", cfg.c_str(), out.c_str()) == SUBDIFF_OK);
    CHECK(std::string(subdiff_last_summary()).find("mass") != std::string::npos);
    CHECK(fs::exists(fs::path(out) / "density.csv"));
    CHECK(subdiff_cmd_run("plot", cfg.c_str(), out.c_str()) == SUBDIFF_ERR_INVALID_ARGUMENT);
    CHECK(subdiff_cmd_run("density", "/nonexistent/x.toml", out.c_str()) == SUBDIFF_ERR_IO);
}
