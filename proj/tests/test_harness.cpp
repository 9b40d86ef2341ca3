#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "chemotaxis/harness.hpp"

using namespace chemotaxis;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST_CASE("dt policies reproduce the step tables") {
    RunConfig cfg;
    cfg.Nx = 200;
    cfg.eps = 0.25;
    const double dx = 2.0 / 200;
    CHECK(grid_dx(cfg) == doctest::Approx(dx).epsilon(1e-15));

    cfg.dt_policy = DtPolicy::DiffusiveSq;
    CHECK(dt_from_policy(cfg) == doctest::Approx(dx * dx / 2.0).epsilon(1e-15));
    cfg.dt_policy = DtPolicy::Kinetic;
    CHECK(dt_from_policy(cfg) == doctest::Approx(0.25 * dx / 2.0).epsilon(1e-15));
    cfg.dt_policy = DtPolicy::Macroscopic;
    CHECK(dt_from_policy(cfg) == doctest::Approx(dx / 2.0).epsilon(1e-15));
    cfg.dt_policy = DtPolicy::OddEvenMacroscopic;
    CHECK(dt_from_policy(cfg) == doctest::Approx(dx / 40.0).epsilon(1e-15));
    cfg.dt_policy = DtPolicy::Fixed;
    cfg.dt_fixed = 0.0125;
    CHECK(dt_from_policy(cfg) == 0.0125);
}

TEST_CASE("config validation names the offending field") {
    RunConfig good;
    CHECK_NOTHROW(validate_config(good));

    auto expect_reject = [](RunConfig cfg) { CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument); };

    RunConfig c = good;
    c.Nx = 1;
    expect_reject(c);
    c = good;
    c.eps = 0.0;
    expect_reject(c);
    c = good;
    c.total_mass = -1.0;
    expect_reject(c);
    c = good;
    c.v_min = -0.5;  // asymmetric against v_max = 1
    expect_reject(c);
    c = good;
    c.dt_policy = DtPolicy::Fixed;
    expect_reject(c);  // no dt given
    c = good;
    c.scheme = Scheme::OddEven;
    c.Nv = 15;
    expect_reject(c);
    c = good;
    c.scheme = Scheme::OddEven;
    c.sigma = 0.8;
    expect_reject(c);
    c = good;
    c.snapshot_times = {0.2, 0.9};
    c.t_end = 0.5;
    expect_reject(c);
    c = good;
    c.reaction.D_S = 0.0;
    expect_reject(c);
}

TEST_CASE("config json: full round trip, strict keys, strict types") {
    const std::string text = R"({
        "scheme": "explicit_kinetic",
        "eps": 0.125,
        "Nx": 100,
        "Nv": 32,
        "x_min": -2.0, "x_max": 2.0,
        "v_min": -1.0, "v_max": 1.0,
        "t_end": 0.25,
        "dt_policy": "fixed",
        "dt": 1e-3,
        "total_mass": 3.5,
        "D_S": 0.9, "a": 1.2, "b": 0.7,
        "sigma": 1.1,
        "project": true,
        "snapshot_times": [0.1, 0.25],
        "output": "out/run"
    })";
    const RunConfig cfg = config_from_json(text);
    CHECK(cfg.scheme == Scheme::ExplicitKinetic);
    CHECK(cfg.eps == 0.125);
    CHECK(cfg.Nx == 100);
    CHECK(cfg.Nv == 32);
    CHECK(cfg.x_min == -2.0);
    CHECK(cfg.x_max == 2.0);
    CHECK(cfg.t_end == 0.25);
    CHECK(cfg.dt_policy == DtPolicy::Fixed);
    CHECK(cfg.dt_fixed == 1e-3);
    CHECK(cfg.total_mass == 3.5);
    CHECK(cfg.reaction.D_S == 0.9);
    CHECK(cfg.reaction.a == 1.2);
    CHECK(cfg.reaction.b == 0.7);
    CHECK(cfg.sigma == 1.1);
    CHECK(cfg.project);
    CHECK(cfg.snapshot_times == std::vector<double>{0.1, 0.25});
    CHECK(cfg.output == "out/run");

    // defaults survive a minimal config
    const RunConfig d = config_from_json(R"({"eps": 0.5})");
    CHECK(d.eps == 0.5);
    CHECK(d.Nx == 200);
    CHECK(d.scheme == Scheme::MMImplicit);
    CHECK(d.total_mass == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-15));

    CHECK_THROWS_AS(config_from_json("not json"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json("[1,2]"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"epz": 1.0})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"eps": "big"})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"scheme": "spectral"})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"dt_policy": "adaptive"})"), std::invalid_argument);
}

TEST_CASE("auto micro-macro operating point switches at the parabolic threshold") {
    RunConfig cfg;
    cfg.Nx = 200;  // dx/2 threshold: eps - 2 eps^2 <= 0.005

    cfg.eps = 1.0;
    apply_auto_mm(cfg);
    CHECK(cfg.scheme == Scheme::MMImplicit);
    CHECK(cfg.dt_policy == DtPolicy::Macroscopic);

    cfg.eps = 1.0 / 512.0;
    apply_auto_mm(cfg);
    CHECK(cfg.scheme == Scheme::MMImplicit);
    CHECK(cfg.dt_policy == DtPolicy::Macroscopic);

    cfg.eps = 0.01;
    apply_auto_mm(cfg);
    CHECK(cfg.scheme == Scheme::MMExplicit);
    CHECK(cfg.dt_policy == DtPolicy::Kinetic);

    cfg.eps = 0.125;
    apply_auto_mm(cfg);
    CHECK(cfg.scheme == Scheme::MMExplicit);
    CHECK(cfg.dt_policy == DtPolicy::Kinetic);
}

TEST_CASE("run: t_end = 0 emits the initial snapshot only") {
    RunConfig cfg;
    cfg.scheme = Scheme::MMExplicit;
    cfg.Nx = 50;
    cfg.Nv = 16;
    cfg.t_end = 0.0;

    const RunResult res = run(cfg);
    REQUIRE(res.snapshots.size() == 1);
    CHECK(res.snapshots[0].t == 0.0);
    CHECK_FALSE(res.blew_up);
    CHECK(res.mass_initial == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-12));
    CHECK(res.mass_final == doctest::Approx(res.mass_initial).epsilon(1e-14));
    CHECK(res.snapshots[0].f.size() == 51u * 17u);
}

TEST_CASE("run: implicit micro-macro completes at eps = 2^-9 with dt = dx/2") {
    RunConfig cfg;
    cfg.scheme = Scheme::MMImplicit;
    cfg.eps = 1.0 / 512.0;
    cfg.Nx = 200;
    cfg.Nv = 64;
    cfg.dt_policy = DtPolicy::Macroscopic;
    cfg.t_end = 0.5;

    const RunResult res = run(cfg);
    CHECK_FALSE(res.blew_up);
    REQUIRE(res.snapshots.size() == 1);
    CHECK(res.snapshots[0].t == 0.5);
    double peak = 0.0;
    for (double x : res.snapshots[0].n) peak = std::max(peak, std::abs(x));
    CHECK(peak < 1e3);
    CHECK(std::abs(res.mass_final - res.mass_initial - res.flux_accumulated) <
          1e-8 * res.mass_initial);
}

TEST_CASE("run: explicit kinetic at a macroscopic step raises the blow-up flag") {
    RunConfig cfg;
    cfg.scheme = Scheme::ExplicitKinetic;
    cfg.eps = 1e-6;
    cfg.Nx = 50;
    cfg.Nv = 16;
    cfg.dt_policy = DtPolicy::Macroscopic;
    cfg.t_end = 0.5;

    const RunResult res = run(cfg);
    CHECK(res.blew_up);
    CHECK(res.diagnostic.find("explicit_kinetic") != std::string::npos);
    REQUIRE(res.snapshots.size() == 1);
    CHECK(res.snapshots[0].t < 0.5);  // the last finite state precedes the target
    for (double x : res.snapshots[0].n) CHECK(std::isfinite(x));
    CHECK(std::isfinite(res.mass_final));
}

TEST_CASE("run: snapshots land exactly and CSV output is bit-identical across runs") {
    RunConfig cfg;
    cfg.scheme = Scheme::MMImplicit;
    cfg.eps = 0.001;
    cfg.Nx = 40;
    cfg.Nv = 8;
    cfg.dt_policy = DtPolicy::Macroscopic;
    cfg.t_end = 0.5;
    cfg.snapshot_times = {0.15, 0.3, 0.5};

    cfg.output = "test_out/runA";
    const RunResult a = run(cfg);
    cfg.output = "test_out/runB";
    const RunResult b = run(cfg);

    REQUIRE(a.snapshots.size() == 3);
    CHECK(a.snapshots[0].t == 0.15);
    CHECK(a.snapshots[1].t == 0.3);
    CHECK(a.snapshots[2].t == 0.5);

    for (int k = 0; k < 3; ++k) {
        const auto ca = slurp("test_out/runA_t" + std::to_string(k) + ".csv");
        const auto cb = slurp("test_out/runB_t" + std::to_string(k) + ".csv");
        CHECK(ca == cb);
        CHECK(!ca.empty());
    }
    const auto head = first_line(slurp("test_out/runA_t0.csv"));
    CHECK(head.rfind("x,n,S,f_0,f_1", 0) == 0);

    // Keller-Segel snapshots carry no distribution columns
    RunConfig ks = cfg;
    ks.scheme = Scheme::KellerSegel;
    ks.snapshot_times.clear();
    ks.output = "test_out/ks";
    run(ks);
    CHECK(first_line(slurp("test_out/ks_t0.csv")) == "x,n,S");
}

TEST_CASE("simulator: projected micro-macro state reconstructs to M n away from walls") {
    RunConfig cfg;
    cfg.scheme = Scheme::MMExplicit;
    cfg.Nx = 30;
    cfg.Nv = 8;
    cfg.project = true;

    Simulator sim(cfg);
    const auto f = sim.distribution();
    const auto& n = sim.density();
    for (int i = 1; i < 30; ++i)
        for (int j = 0; j <= 8; ++j)
            CHECK(f[i * 9 + j] == doctest::Approx(0.5 * n[i]).epsilon(1e-13));

    CHECK_THROWS_AS(sim.advance_to(-0.1), std::invalid_argument);
    CHECK(sim.advance_to(0.0));
    CHECK(sim.time() == 0.0);
}

TEST_CASE("convergence study: nesting enforced, duplicates are exact zeros") {
    RunConfig base;
    base.scheme = Scheme::MMExplicit;
    base.Nv = 8;
    base.dt_policy = DtPolicy::DiffusiveSq;

    CHECK_THROWS_AS(convergence_study(base, {1.0}, {80, 120}, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(convergence_study(base, {1.0}, {160, 80}, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(convergence_study(base, {1.0}, {80}, 0.01), std::invalid_argument);

    const auto dup = convergence_study(base, {0.5}, {24, 24}, 0.005);
    REQUIRE(dup.size() == 1);
    REQUIRE(dup[0].rows.size() == 1);
    CHECK(dup[0].rows[0].error_n == 0.0);
    CHECK(std::isnan(dup[0].rows[0].order_n));
}

TEST_CASE("convergence study: second order in the diffusive regime") {
    RunConfig base;
    base.scheme = Scheme::MMExplicit;
    base.Nv = 16;
    base.dt_policy = DtPolicy::DiffusiveSq;
    base.output = "test_out/conv";

    const auto reports = convergence_study(base, {1e-6}, {40, 80, 160}, 0.1);
    REQUIRE(reports.size() == 1);
    const auto& rows = reports[0].rows;
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].error_n > 0.0);
    CHECK(rows[1].error_n > 0.0);
    CHECK(rows[1].error_n < rows[0].error_n);
    CHECK(rows[1].order_n > 1.4);
    CHECK(rows[1].order_n < 2.6);
    // the reconstructed distribution converges alongside the density
    CHECK(std::isfinite(rows[1].error_f));
    CHECK(rows[1].error_f < rows[0].error_f);

    const auto head = first_line(slurp("test_out/conv_converge_eps0.csv"));
    CHECK(head == "Nx,error,order");
}

TEST_CASE("regime sweep: Keller-Segel reference does not depend on the eps list") {
    RunConfig base;
    base.Nx = 50;
    base.Nv = 16;
    base.t_end = 0.2;
    base.output = "test_out/sweep";

    const auto s1 = regime_sweep(base, {1.0, 0.125});
    base.output.clear();
    const auto s2 = regime_sweep(base, {0.25});
    CHECK(s1.n_ks == s2.n_ks);

    REQUIRE(s1.n.size() == 2);
    REQUIRE(s1.dist_ks.size() == 2);
    CHECK(s1.dist_ks[0] > s1.dist_ks[1]);  // closer to the limit at smaller eps
    CHECK(std::isfinite(s1.dist_ks[0]));

    const auto head = first_line(slurp("test_out/sweep_sweep.csv"));
    CHECK(head == "x,n_1,n_0.125,n_ks");
}

TEST_CASE("scheme comparison: kinetic and diffusive branches") {
    RunConfig base;
    base.Nx = 50;
    base.Nv = 16;
    base.t_end = 0.2;
    base.eps = 1.0;
    base.output = "test_out/cmp";

    const auto kin = scheme_comparison(base);
    CHECK(kin.labels == std::vector<std::string>{"mm", "explicit_kinetic", "odd_even"});
    REQUIRE(kin.n.size() == 3);
    for (size_t i = 0; i < 3; ++i) CHECK(kin.dist[i][i] == 0.0);
    CHECK(kin.dist[0][1] < 0.15);
    CHECK(kin.dist[0][2] < 0.15);
    CHECK(first_line(slurp("test_out/cmp_compare.csv")) ==
          "x,n_mm,n_explicit_kinetic,n_odd_even");

    base.eps = 1e-6;
    base.output.clear();
    const auto dif = scheme_comparison(base);
    CHECK(dif.labels == std::vector<std::string>{"mm", "odd_even", "keller_segel"});
    CHECK(dif.dist[0][2] < 0.1);
    CHECK(dif.dist[1][2] < 0.1);
}

TEST_CASE("evolution study: stationarity diagnostic and exact mass audit") {
    RunConfig base;
    base.Nx = 50;
    base.Nv = 16;
    base.eps = 0.01;

    const auto ev = evolution_study(base, {0.1, 0.2, 0.3, 0.4});
    CHECK_FALSE(ev.blew_up);
    REQUIRE(ev.times.size() == 4);
    CHECK(ev.times[0] == 0.1);
    CHECK(ev.times[3] == 0.4);
    REQUIRE(ev.diffs.size() == 3);
    for (double d : ev.diffs) CHECK(std::isfinite(d));
    CHECK(std::abs(ev.mass_final - ev.mass_initial - ev.flux_accumulated) <
          1e-8 * ev.mass_initial);

    base.output = "test_out/evo";
    const auto ev2 = evolution_study(base, {0.1});
    CHECK(ev2.diffs.empty());
    CHECK(first_line(slurp("test_out/evo_evolve.csv")) == "x,n_t0.1");

    // report text mentions the audit residual
    const auto text = report_text(ev);
    CHECK(text.find("audit residual") != std::string::npos);
}
