#include "chemotaxis.h"

#include <algorithm>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemotaxis/harness.hpp"
#include "json.hpp"

using nlohmann::json;

struct ctx_solver {
    explicit ctx_solver(const chemotaxis::RunConfig& cfg) : sim(cfg) {}
    chemotaxis::Simulator sim;
};

struct ctx_report {
    int status = CTX_OK;
    std::string text;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// The run config plus the list keys only the studies understand.
struct ExperimentInput {
    chemotaxis::RunConfig cfg;
    std::vector<double> eps_list;
    std::vector<int> nx_list;
    bool has_eps = false;
    bool has_nx = false;
};

ExperimentInput parse_experiment(const char* config_json) {
    json j;
    try {
        j = json::parse(config_json ? config_json : "{}");
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config parse: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

    ExperimentInput in;
    try {
        if (j.contains("eps_list")) {
            in.eps_list = j.at("eps_list").get<std::vector<double>>();
            in.has_eps = true;
            j.erase("eps_list");
        }
        if (j.contains("nx_list")) {
            in.nx_list = j.at("nx_list").get<std::vector<int>>();
            in.has_nx = true;
            j.erase("nx_list");
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config field: ") + e.what());
    }
    in.cfg = chemotaxis::config_from_json(j.dump());
    return in;
}

bool mentions_blow_up(const std::string& msg) { return msg.find("blew up") != std::string::npos; }

int copy_field(const std::vector<double>& field, double* out, int len) {
    if (!out) {
        set_error("null output buffer");
        return CTX_ERR_CONFIG;
    }
    if (len != static_cast<int>(field.size())) {
        set_error("buffer length " + std::to_string(len) + " does not match grid size " +
                  std::to_string(field.size()));
        return CTX_ERR_CONFIG;
    }
    std::copy(field.begin(), field.end(), out);
    return CTX_OK;
}

}  // namespace

extern "C" {

const char* ctx_version(void) { return "1.0.0"; }

const char* ctx_last_error(void) { return g_last_error.c_str(); }

ctx_solver* ctx_solver_create(const char* config_json) {
    try {
        if (!config_json) throw std::invalid_argument("config is null");
        chemotaxis::RunConfig cfg = chemotaxis::config_from_json(config_json);
        return new ctx_solver(cfg);
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    } catch (...) {
        set_error("unknown error while building the solver");
        return nullptr;
    }
}

void ctx_solver_destroy(ctx_solver* solver) { delete solver; }

int ctx_solver_advance(ctx_solver* solver, double t_target) {
    if (!solver) {
        set_error("null solver handle");
        return CTX_ERR_CONFIG;
    }
    try {
        if (!solver->sim.advance_to(t_target)) {
            set_error(std::string(chemotaxis::scheme_name(solver->sim.config().scheme)) +
                      " lost finiteness near t = " + std::to_string(solver->sim.time()));
            return CTX_ERR_BLOWUP;
        }
        return CTX_OK;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return CTX_ERR_CONFIG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return mentions_blow_up(e.what()) ? CTX_ERR_BLOWUP : CTX_ERR_CONFIG;
    }
}

double ctx_solver_time(const ctx_solver* solver) { return solver ? solver->sim.time() : 0.0; }

int ctx_solver_grid_size(const ctx_solver* solver) {
    return solver ? static_cast<int>(solver->sim.density().size()) : 0;
}

int ctx_solver_density(const ctx_solver* solver, double* out, int len) {
    if (!solver) {
        set_error("null solver handle");
        return CTX_ERR_CONFIG;
    }
    return copy_field(solver->sim.density(), out, len);
}

int ctx_solver_chemoattractant(const ctx_solver* solver, double* out, int len) {
    if (!solver) {
        set_error("null solver handle");
        return CTX_ERR_CONFIG;
    }
    return copy_field(solver->sim.chemoattractant(), out, len);
}

ctx_report* ctx_experiment(const char* kind, const char* config_json, const char* output_base) {
    auto* rep = new (std::nothrow) ctx_report;
    if (!rep) return nullptr;
    try {
        const std::string k = kind ? kind : "";
        ExperimentInput in = parse_experiment(config_json);
        if (output_base && *output_base) in.cfg.output = output_base;

        if (k == "run") {
            const chemotaxis::RunResult res = chemotaxis::run(in.cfg);
            rep->status = res.blew_up ? CTX_ERR_BLOWUP : CTX_OK;
            rep->text = chemotaxis::report_text(res);
        } else if (k == "converge") {
            if (!in.has_eps) in.eps_list = {1.0, 0.01, 1e-4, 1e-6};
            if (!in.has_nx) in.nx_list = {80, 160, 320, 640};
            const auto res =
                chemotaxis::convergence_study(in.cfg, in.eps_list, in.nx_list, in.cfg.t_end);
            rep->text = chemotaxis::report_text(res);
        } else if (k == "sweep") {
            if (!in.has_eps) in.eps_list = {1.0, 0.125, 0.03125, 0.0078125, 0.001953125};
            const auto res = chemotaxis::regime_sweep(in.cfg, in.eps_list);
            rep->text = chemotaxis::report_text(res);
        } else if (k == "compare") {
            const auto res = chemotaxis::scheme_comparison(in.cfg);
            rep->text = chemotaxis::report_text(res);
        } else if (k == "evolve") {
            std::vector<double> times = in.cfg.snapshot_times;
            if (times.empty()) times = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
            const auto res = chemotaxis::evolution_study(in.cfg, times);
            rep->status = res.blew_up ? CTX_ERR_BLOWUP : CTX_OK;
            rep->text = chemotaxis::report_text(res);
        } else {
            throw std::invalid_argument("unknown experiment kind '" + k +
                                        "' (expected run, converge, sweep, compare or evolve)");
        }
    } catch (const std::invalid_argument& e) {
        rep->status = CTX_ERR_CONFIG;
        rep->text = e.what();
        set_error(e.what());
    } catch (const std::exception& e) {
        rep->status = mentions_blow_up(e.what()) ? CTX_ERR_BLOWUP : CTX_ERR_CONFIG;
        rep->text = e.what();
        set_error(e.what());
    } catch (...) {
        rep->status = CTX_ERR_CONFIG;
        rep->text = "unknown error";
        set_error(rep->text);
    }
    return rep;
}

int ctx_report_status(const ctx_report* report) {
    return report ? report->status : CTX_ERR_CONFIG;
}

const char* ctx_report_text(const ctx_report* report) { return report ? report->text.c_str() : ""; }

void ctx_report_destroy(ctx_report* report) { delete report; }

}  // extern "C"
