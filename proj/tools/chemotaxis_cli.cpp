// Command-line front end; all solver work goes through the C API.
#include <array>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chemotaxis.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct SubOpts {
    CLI::App* sub = nullptr;
    std::string kind;

    std::string config_file;
    std::string scheme, dt_policy, output;
    double eps = 0, t_end = 0, dt = 0, mass = 0, sigma = 0, ds = 0, a = 0, b = 0;
    double x_min = 0, x_max = 0, v_min = 0, v_max = 0;
    int nx = 0, nv = 0;
    bool project = false;
    std::vector<double> snapshots, eps_list;
    std::vector<int> nx_list;

    std::map<std::string, CLI::Option*> opt;  // config key -> option
};

void add_common(CLI::App& sub, SubOpts& o) {
    sub.add_option("--config", o.config_file, "JSON config file; flags override its values")
        ->check(CLI::ExistingFile);
    o.opt["scheme"] = sub.add_option(
        "--scheme", o.scheme,
        "mm_explicit, mm_implicit, explicit_kinetic, keller_segel or odd_even");
    o.opt["eps"] = sub.add_option("--eps", o.eps, "mean free path scaling");
    o.opt["Nx"] = sub.add_option("--nx", o.nx, "spatial cells");
    o.opt["Nv"] = sub.add_option("--nv", o.nv, "velocity cells");
    o.opt["x_min"] = sub.add_option("--x-min", o.x_min, "left end of the domain");
    o.opt["x_max"] = sub.add_option("--x-max", o.x_max, "right end of the domain");
    o.opt["v_min"] = sub.add_option("--v-min", o.v_min, "lowest velocity");
    o.opt["v_max"] = sub.add_option("--v-max", o.v_max, "highest velocity");
    o.opt["t_end"] = sub.add_option("--t-end", o.t_end, "final time");
    o.opt["dt_policy"] = sub.add_option(
        "--dt-policy", o.dt_policy,
        "diffusive_sq, kinetic, macroscopic, odd_even_macroscopic or fixed");
    o.opt["dt"] = sub.add_option("--dt", o.dt, "step size for the fixed policy");
    o.opt["total_mass"] = sub.add_option("--mass", o.mass, "total mass of the seed");
    o.opt["D_S"] = sub.add_option("--ds", o.ds, "chemoattractant diffusivity");
    o.opt["a"] = sub.add_option("--a", o.a, "chemoattractant production rate");
    o.opt["b"] = sub.add_option("--b", o.b, "chemoattractant decay rate");
    o.opt["sigma"] = sub.add_option("--sigma", o.sigma, "turning rate");
    o.opt["project"] =
        sub.add_flag("--project,!--no-project", o.project, "start from the equilibrium seed");
    o.opt["snapshot_times"] = sub.add_option("--snapshots", o.snapshots, "snapshot times")
                                  ->delimiter(',');
    o.opt["output"] = sub.add_option("--output,-o", o.output, "CSV path prefix");
}

json build_config(const SubOpts& o) {
    json j = json::object();
    if (!o.config_file.empty()) {
        std::ifstream in(o.config_file);
        if (!in) throw std::runtime_error("cannot open config file: " + o.config_file);
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw std::runtime_error(std::string("config parse: ") + e.what());
        }
        if (!j.is_object()) throw std::runtime_error("config must be a JSON object");
    }

    auto set = [&](const char* key) { return o.opt.count(key) && o.opt.at(key)->count() > 0; };
    if (set("scheme")) j["scheme"] = o.scheme;
    if (set("eps")) j["eps"] = o.eps;
    if (set("Nx")) j["Nx"] = o.nx;
    if (set("Nv")) j["Nv"] = o.nv;
    if (set("x_min")) j["x_min"] = o.x_min;
    if (set("x_max")) j["x_max"] = o.x_max;
    if (set("v_min")) j["v_min"] = o.v_min;
    if (set("v_max")) j["v_max"] = o.v_max;
    if (set("t_end")) j["t_end"] = o.t_end;
    if (set("dt_policy")) j["dt_policy"] = o.dt_policy;
    if (set("dt")) j["dt"] = o.dt;
    if (set("total_mass")) j["total_mass"] = o.mass;
    if (set("D_S")) j["D_S"] = o.ds;
    if (set("a")) j["a"] = o.a;
    if (set("b")) j["b"] = o.b;
    if (set("sigma")) j["sigma"] = o.sigma;
    if (set("project")) j["project"] = o.project;
    if (set("snapshot_times")) j["snapshot_times"] = o.snapshots;
    if (set("output")) j["output"] = o.output;
    if (set("eps_list")) j["eps_list"] = o.eps_list;
    if (set("nx_list")) j["nx_list"] = o.nx_list;
    return j;
}

int run_experiment(const SubOpts& o) {
    json cfg;
    try {
        cfg = build_config(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return CTX_ERR_CONFIG;
    }

    ctx_report* rep = ctx_experiment(o.kind.c_str(), cfg.dump().c_str(), "");
    if (!rep) {
        std::cerr << "error: experiment allocation failed\n";
        return CTX_ERR_CONFIG;
    }
    const int status = ctx_report_status(rep);
    if (status == CTX_ERR_CONFIG)
        std::cerr << "error: " << ctx_report_text(rep) << "\n";
    else
        std::cout << ctx_report_text(rep);
    ctx_report_destroy(rep);
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D kinetic chemotaxis solvers"};
    app.set_version_flag("--version", ctx_version());
    app.require_subcommand(1);

    std::array<SubOpts, 5> subs;
    const std::array<std::pair<const char*, const char*>, 5> kinds = {{
        {"run", "integrate one configuration and write density snapshots"},
        {"converge", "grid-doubling self-convergence table (accepts --eps-list, --nx-list)"},
        {"sweep", "micro-macro densities across eps against Keller-Segel (accepts --eps-list)"},
        {"compare", "cross-scheme density comparison at one eps"},
        {"evolve", "long run with stationarity diagnostics at the snapshot times"},
    }};
    for (size_t i = 0; i < subs.size(); ++i) {
        subs[i].kind = kinds[i].first;
        subs[i].sub = app.add_subcommand(kinds[i].first, kinds[i].second);
        add_common(*subs[i].sub, subs[i]);
    }
    for (auto& o : subs)
        if (o.kind == "converge" || o.kind == "sweep")
            o.opt["eps_list"] =
                o.sub->add_option("--eps-list", o.eps_list, "eps values for the study")
                    ->delimiter(',');
    for (auto& o : subs)
        if (o.kind == "converge")
            o.opt["nx_list"] =
                o.sub->add_option("--nx-list", o.nx_list, "nesting grid sizes, coarse to fine")
                    ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help/version or the error
        return code == 0 ? 0 : CTX_ERR_CONFIG;
    }

    for (const auto& o : subs)
        if (o.sub->parsed()) return run_experiment(o);
    return CTX_ERR_CONFIG;  // unreachable: a subcommand is required
}
