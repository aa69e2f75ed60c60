#include "subdiff/config.hpp"
#include "subdiff/error.hpp"
#include "subdiff/runner.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace subdiff;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

const char* kStable = R"(seed = 7
# half-stable kernel
[kernel]
type = "stable"
theta = 0.5

[lambda_grid]
lambda_min = 0.04
lambda_max = 400
points_per_decade = 4

[t_grid]
t_min = 1
t_max = 10
points_per_decade = 4

[tau_grid]
values = [0, 1, 2]
)";

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("subdiff_test_config_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string parse_message(const std::string& text) {
    try {
        parse_config(text, {}, "case.toml");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Parse);
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("a complete configuration parses") {
    const ExperimentConfig c = parse_config(kStable);
    REQUIRE(c.kernel);
    CHECK(c.kernel->name() == "stable");
    CHECK(c.seed == 7);
    REQUIRE(c.t_grid);
    CHECK(c.t_grid->values().size() == 5);
    CHECK(c.lambda_grid->values()[8] == Approx(4.0));
    CHECK(c.tau_values == std::vector<double>{0.0, 1.0, 2.0});
    CHECK(c.tol.mass == 1e-4);
    CHECK_FALSE(c.problem);
}

TEST_CASE("the echo is complete and parses to itself") {
    const ExperimentConfig c = parse_config(kStable);
    const std::string e = c.echo();
    CHECK(e.find("[tolerances]") != std::string::npos);
    CHECK(e.find("theta = 0.5\n") != std::string::npos);
    CHECK(parse_config(e).echo() == e);
    const ExperimentConfig d = parse_config("[kernel]\ntype = \"gamma\"\na = 0.3\nb = 0.1\n[problem]\ngamma = 2\n");
    CHECK(d.echo().find("a = 0.3\n") != std::string::npos);
    CHECK(parse_config(d.echo()).echo() == d.echo());
}

TEST_CASE("diagnostics name the field and line") {
    CHECK(parse_message("[kernel]\ntype = \"stable\"\n").find("missing required field 'kernel.theta'") != std::string::npos);
    CHECK(parse_message("[kernel]\ntype = \"stable\"\ntheta = 0.5\nfoo = 1\n").find("case.toml:4: unknown field 'kernel.foo'") !=
          std::string::npos);
    CHECK(parse_message("\n[bogus]\n").find("case.toml:2: unknown section [bogus]") != std::string::npos);
    CHECK(parse_message("[t_grid]\nt_min = 10\nt_max = 1\npoints_per_decade = 4\n").find("'t_grid.t_max'") !=
          std::string::npos);
    CHECK(parse_message("[t_grid]\nt_min = 1\nt_max = 10\npoints_per_decade = 2\n").find("'t_grid.points_per_decade'") !=
          std::string::npos);
    CHECK(parse_message("[kernel\n").find("case.toml:1:") != std::string::npos);
    CHECK(parse_message("[kernel]\ntype = \"stable\"\ntheta = \"half\"\n").find("'kernel.theta'") != std::string::npos);
    CHECK(parse_message("[kernel]\ntype = \"levy\"\n").find("'kernel.type'") != std::string::npos);
    CHECK_FALSE(parse_message("[kernel]\ntype = \"stable\"\ntheta = 0.5\ntheta = 0.6\n").empty());
}

TEST_CASE("module validation surfaces as configuration errors") {
    CHECK_THROWS_AS(parse_config("[kernel]\ntype = \"stable\"\ntheta = 1.5\n"), Error);
    CHECK_THROWS_AS(parse_config("[problem]\nalpha = 0.5\nb = 1\n"), Error);
}

TEST_CASE("missing files are I/O errors") {
    try {
        load_config("/nonexistent/subdiff.toml");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Io);
    }
}

TEST_CASE("synthetic profiles from a table") {
    const fs::path dir = scratch("synthetic");
    std::ofstream(dir / "v.csv") << "tau,v\n1,1\n2,0.5\n4,0.25\n";
    std::ofstream(dir / "c.toml") << "[kernel]\ntype = \"stable\"\ntheta = 0.5\n[problem]\nsynthetic_v = \"v.csv\"\ntail_exponent = 2\n";
    const ExperimentConfig c = load_config(dir / "c.toml");
    REQUIRE(c.synthetic_v);
    const VProfile v = c.profile();
    CHECK(v(2.0) == Approx(0.5));
    CHECK(v(8.0) == Approx(0.0625));
    std::ofstream(dir / "short.csv") << "tau,v\n1,1\n";
    CHECK_THROWS_AS(parse_config("[problem]\nsynthetic_v = \"short.csv\"\ntail_exponent = 2\n", dir), Error);
    CHECK_THROWS_AS(parse_config("[problem]\nsynthetic_v = \"absent.csv\"\ntail_exponent = 2\n", dir), Error);
}

TEST_CASE("kernel-eval writes the transform table") {
    const fs::path dir = scratch("kernel_eval");
    const RunResult r = run_command("kernel-eval", parse_config(kStable), dir);
    CHECK(r.passed());
    CHECK(r.outputs.back() == "run.manifest.txt");
    const auto rows = lines(dir / "kernel.csv");
    REQUIRE(rows.size() == 1 + 17);
    CHECK(rows[0] == "lambda,K,Phi,rho,x,L");
    CHECK(rows[9].rfind("4,0.5,2,0.5,0.25,1", 0) == 0);
    const std::string manifest = slurp(dir / "run.manifest.txt");
    CHECK(manifest.find("command = \"kernel-eval\"") != std::string::npos);
    CHECK(manifest.find("status = \"ok\"") != std::string::npos);
    CHECK(manifest.find("theta = 0.5") != std::string::npos);
    for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("density runs write the grid and the mass table") {
    const fs::path dir = scratch("density");
    run_command("density", parse_config(kStable), dir);
    const auto rows = lines(dir / "density.csv");
    REQUIRE(rows.size() == 1 + 5 * 3);
    CHECK(rows[0] == "t,tau,G,err");
    CHECK(rows[2].rfind("1,1,0.4393912894677", 0) == 0);
    const auto mass = lines(dir / "normalization.csv");
    CHECK(mass[0] == "t,mass,tail_bound,tau_max");
    CHECK(mass.size() == 6);
}

TEST_CASE("runs are byte-for-byte reproducible") {
    const fs::path a = scratch("repro_a");
    const fs::path b = scratch("repro_b");
    const ExperimentConfig c = parse_config(kStable);
    run_command("density", c, a);
    run_command("density", c, b);
    CHECK(slurp(a / "density.csv") == slurp(b / "density.csv"));
    CHECK(slurp(a / "run.manifest.txt") == slurp(b / "run.manifest.txt"));
}

TEST_CASE("C2 has no density grid") {
    const fs::path dir = scratch("c2");
    const ExperimentConfig c =
        parse_config("[kernel]\ntype = \"distributed_asymptotic\"\nC = 1\nkappa = 1\n[t_grid]\nt_min = 1\nt_max = 10\n"
                     "points_per_decade = 4\n[tau_grid]\nvalues = [1]\n");
    try {
        run_command("density", c, dir);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Unsupported);
    }
    CHECK_FALSE(fs::exists(dir / "density.csv"));
}

TEST_CASE("unknown commands are rejected") {
    CHECK_THROWS_AS(run_command("plot", parse_config(kStable), scratch("unknown")), Error);
    CHECK(command_names().size() == 5);
}

TEST_CASE("failure manifests carry the error") {
    const fs::path dir = scratch("failure");
    write_failure_manifest("density", "[kernel]\n", dir, "something broke");
    const std::string m = slurp(dir / "run.manifest.txt");
    CHECK(m.find("status = \"error\"") != std::string::npos);
    CHECK(m.find("# error: something broke") != std::string::npos);
}

TEST_CASE("atomic writes replace whole files") {
    const fs::path dir = scratch("atomic");
    write_atomic(dir / "f.txt", "first");
    write_atomic(dir / "f.txt", "second");
    CHECK(slurp(dir / "f.txt") == "second");
    CHECK_FALSE(fs::exists(dir / "f.txt.tmp"));
}

TEST_CASE("verify on a Gamma kernel passes its checks") {
    const fs::path dir = scratch("verify");
    const ExperimentConfig c = parse_config(R"(seed = 3
[kernel]
type = "gamma"
a = 1
b = 1
[problem]
gamma = 2
[t_grid]
t_min = 1e3
t_max = 1e5
points_per_decade = 10
)");
    const RunResult r = run_command("verify", c, dir);
    CHECK(r.passed());
    CHECK(r.checks.size() >= 3);
    for (const Check& ch : r.checks) {
        CAPTURE(ch.name);
        CHECK(ch.passed);
    }
    for (const char* f : {"report.csv", "report.txt", "series.csv", "checks.csv", "run.manifest.txt"})
        CHECK(fs::exists(dir / f));
}
