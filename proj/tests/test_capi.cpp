// Exercises the shared library strictly through the C header.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "chemotaxis.h"

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

bool contains(const char* text, const char* needle) {
    return text && std::strstr(text, needle) != nullptr;
}

double trapezoid_mass(const std::vector<double>& n, double dx) {
    double s = 0.0;
    for (double v : n) s += v;
    s -= 0.5 * (n.front() + n.back());
    return dx * s;
}

constexpr const char* kSmallRun =
    R"({"scheme":"mm_implicit","eps":0.0078125,"Nx":50,"Nv":16,"t_end":0.5})";

}  // namespace

TEST_CASE("version and error strings exist") {
    REQUIRE(ctx_version() != nullptr);
    CHECK(std::strlen(ctx_version()) > 0);
    REQUIRE(ctx_last_error() != nullptr);
}

TEST_CASE("solver lifecycle: create, advance, read fields") {
    ctx_solver* s = ctx_solver_create(kSmallRun);
    REQUIRE(s != nullptr);
    CHECK(ctx_solver_time(s) == 0.0);
    CHECK(ctx_solver_grid_size(s) == 51);

    std::vector<double> n(51), S(51);
    CHECK(ctx_solver_density(s, n.data(), 51) == CTX_OK);
    CHECK(trapezoid_mass(n, 2.0 / 50) ==
          doctest::Approx(6.283185307179586).epsilon(1e-12));

    CHECK(ctx_solver_advance(s, 0.1) == CTX_OK);
    CHECK(ctx_solver_time(s) == doctest::Approx(0.1).epsilon(1e-12));

    CHECK(ctx_solver_density(s, n.data(), 51) == CTX_OK);
    CHECK(ctx_solver_chemoattractant(s, S.data(), 51) == CTX_OK);
    for (double v : n) CHECK(std::isfinite(v));
    for (double v : S) CHECK(std::isfinite(v));
    // the zero-inflow walls drain a little mass; it stays close to the seed
    CHECK(trapezoid_mass(n, 2.0 / 50) ==
          doctest::Approx(6.283185307179586).epsilon(1e-2));

    // advancing again from the landed time is fine; going backwards is not
    CHECK(ctx_solver_advance(s, 0.1) == CTX_OK);
    CHECK(ctx_solver_advance(s, 0.05) == CTX_ERR_CONFIG);
    CHECK(contains(ctx_last_error(), "past"));

    CHECK(ctx_solver_density(s, n.data(), 50) == CTX_ERR_CONFIG);
    CHECK(contains(ctx_last_error(), "grid size"));
    CHECK(ctx_solver_density(s, nullptr, 51) == CTX_ERR_CONFIG);

    ctx_solver_destroy(s);
}

TEST_CASE("solver creation rejects bad configs") {
    CHECK(ctx_solver_create("{nope") == nullptr);
    CHECK(contains(ctx_last_error(), "parse"));

    CHECK(ctx_solver_create(R"({"epz":1})") == nullptr);
    CHECK(contains(ctx_last_error(), "epz"));

    CHECK(ctx_solver_create(R"({"Nx":1})") == nullptr);
    CHECK(ctx_solver_create(nullptr) == nullptr);

    // NULL handles are inert
    ctx_solver_destroy(nullptr);
    CHECK(ctx_solver_grid_size(nullptr) == 0);
    CHECK(ctx_solver_time(nullptr) == 0.0);
    CHECK(ctx_solver_advance(nullptr, 1.0) == CTX_ERR_CONFIG);
    double buf[1];
    CHECK(ctx_solver_density(nullptr, buf, 1) == CTX_ERR_CONFIG);
    CHECK(ctx_solver_chemoattractant(nullptr, buf, 1) == CTX_ERR_CONFIG);
}

TEST_CASE("stiff explicit kinetic run reports blow-up") {
    ctx_solver* s = ctx_solver_create(
        R"({"scheme":"explicit_kinetic","eps":1e-6,"Nx":50,"Nv":16,"dt_policy":"macroscopic"})");
    REQUIRE(s != nullptr);
    CHECK(ctx_solver_advance(s, 0.5) == CTX_ERR_BLOWUP);
    CHECK(contains(ctx_last_error(), "explicit_kinetic"));
    // the solver stays unhealthy
    CHECK(ctx_solver_advance(s, 1.0) == CTX_ERR_BLOWUP);
    ctx_solver_destroy(s);
}

TEST_CASE("experiment run writes csv and reports mass") {
    fs::remove_all("capi_out");
    ctx_report* rep = ctx_experiment("run", kSmallRun, "capi_out/run");
    REQUIRE(rep != nullptr);
    CHECK(ctx_report_status(rep) == CTX_OK);
    CHECK(contains(ctx_report_text(rep), "mass: initial"));
    CHECK(contains(ctx_report_text(rep), "snapshots: 1"));
    ctx_report_destroy(rep);

    const auto csv = slurp("capi_out/run_t0.csv");
    CHECK(first_line(csv).rfind("x,n,S,f_0", 0) == 0);
    fs::remove_all("capi_out");
}

TEST_CASE("experiment run surfaces blow-up status") {
    ctx_report* rep = ctx_experiment(
        "run", R"({"scheme":"explicit_kinetic","eps":1e-6,"Nx":50,"Nv":16})", "");
    REQUIRE(rep != nullptr);
    CHECK(ctx_report_status(rep) == CTX_ERR_BLOWUP);
    CHECK(contains(ctx_report_text(rep), "blow-up"));
    ctx_report_destroy(rep);
}

TEST_CASE("experiment converge honors the list keys") {
    ctx_report* rep = ctx_experiment(
        "converge",
        R"({"scheme":"mm_explicit","dt_policy":"diffusive_sq","t_end":0.01,"Nv":8,)"
        R"("eps_list":[0.5],"nx_list":[20,40]})",
        "");
    REQUIRE(rep != nullptr);
    CHECK(ctx_report_status(rep) == CTX_OK);
    CHECK(contains(ctx_report_text(rep), "eps = 0.5"));
    CHECK(contains(ctx_report_text(rep), "Nx = 40"));
    CHECK(contains(ctx_report_text(rep), "order_n"));
    ctx_report_destroy(rep);
}

TEST_CASE("experiment sweep compares against Keller-Segel") {
    ctx_report* rep = ctx_experiment(
        "sweep", R"({"Nx":50,"Nv":16,"t_end":0.1,"eps_list":[0.03125,0.001953125]})", "");
    REQUIRE(rep != nullptr);
    CHECK(ctx_report_status(rep) == CTX_OK);
    CHECK(contains(ctx_report_text(rep), "rel-L2 vs Keller-Segel"));
    ctx_report_destroy(rep);
}

TEST_CASE("experiment compare labels the kinetic-regime schemes") {
    ctx_report* rep = ctx_experiment("compare", R"({"eps":1.0,"Nx":40,"Nv":16,"t_end":0.05})", "");
    REQUIRE(rep != nullptr);
    CHECK(ctx_report_status(rep) == CTX_OK);
    CHECK(contains(ctx_report_text(rep), "rel-L2(mm, explicit_kinetic)"));
    CHECK(contains(ctx_report_text(rep), "rel-L2(explicit_kinetic, odd_even)"));
    ctx_report_destroy(rep);
}

TEST_CASE("experiment evolve reports the stationarity diagnostic") {
    ctx_report* rep = ctx_experiment(
        "evolve", R"({"eps":0.01,"Nx":40,"Nv":16,"snapshot_times":[0.1,0.2,0.3]})", "");
    REQUIRE(rep != nullptr);
    CHECK(ctx_report_status(rep) == CTX_OK);
    CHECK(contains(ctx_report_text(rep), "||n(t=0.2) - n(t=0.1)||_2"));
    CHECK(contains(ctx_report_text(rep), "audit residual"));
    ctx_report_destroy(rep);
}

TEST_CASE("experiment errors come back as config status") {
    ctx_report* rep = ctx_experiment("wiggle", "{}", "");
    REQUIRE(rep != nullptr);
    CHECK(ctx_report_status(rep) == CTX_ERR_CONFIG);
    CHECK(contains(ctx_report_text(rep), "unknown experiment kind"));
    ctx_report_destroy(rep);

    rep = ctx_experiment("sweep", R"({"eps_list":"all"})", "");
    REQUIRE(rep != nullptr);
    CHECK(ctx_report_status(rep) == CTX_ERR_CONFIG);
    ctx_report_destroy(rep);

    rep = ctx_experiment("run", "[1,2,3]", "");
    REQUIRE(rep != nullptr);
    CHECK(ctx_report_status(rep) == CTX_ERR_CONFIG);
    CHECK(contains(ctx_report_text(rep), "object"));
    ctx_report_destroy(rep);

    CHECK(ctx_report_status(nullptr) == CTX_ERR_CONFIG);
    CHECK(std::string(ctx_report_text(nullptr)).empty());
    ctx_report_destroy(nullptr);
}

TEST_CASE("output base overrides the config prefix") {
    fs::remove_all("capi_out");
    ctx_report* rep = ctx_experiment(
        "run",
        R"({"scheme":"keller_segel","Nx":40,"Nv":8,"t_end":0.1,"output":"capi_out/ignored"})",
        "capi_out/override");
    REQUIRE(rep != nullptr);
    CHECK(ctx_report_status(rep) == CTX_OK);
    ctx_report_destroy(rep);

    CHECK(fs::exists("capi_out/override_t0.csv"));
    CHECK(!fs::exists("capi_out/ignored_t0.csv"));
    CHECK(first_line(slurp("capi_out/override_t0.csv")) == "x,n,S");
    fs::remove_all("capi_out");
}
