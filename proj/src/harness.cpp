#include "chemotaxis/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <utility>

namespace chemotaxis {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool finite_profile(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x) || std::abs(x) > 1e100) return false;
    return true;
}

// dx-weighted discrete L2 norm, half weights at the wall nodes
double node_norm(const std::vector<double>& v, double dx) {
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i)
        s += ((i == 0 || i + 1 == v.size()) ? 0.5 : 1.0) * v[i] * v[i];
    return std::sqrt(dx * s);
}

double node_mass(const std::vector<double>& n, double dx) {
    double s = 0.0;
    for (size_t i = 0; i < n.size(); ++i)
        s += ((i == 0 || i + 1 == n.size()) ? 0.5 : 1.0) * n[i];
    return dx * s;
}

// dx*dv-weighted norm of a node-major distribution
double dist_norm(const std::vector<double>& f, int Nx, const VelocityGrid& vg, double dx) {
    const auto wv = bracket_weights(vg);
    double s = 0.0;
    for (int i = 0; i <= Nx; ++i) {
        const double cx = (i == 0 || i == Nx) ? 0.5 : 1.0;
        double row = 0.0;
        for (int j = 0; j <= vg.Nv; ++j) {
            const double x = f[static_cast<size_t>(i) * (vg.Nv + 1) + j];
            row += wv[j] * x * x;
        }
        s += cx * row;
    }
    return std::sqrt(dx * s);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& cols) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    for (size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    const size_t rows = cols.empty() ? 0 : cols[0]->size();
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << fmt17((*cols[c])[r]);
        out << '\n';
    }
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "mm_explicit") return Scheme::MMExplicit;
    if (name == "mm_implicit") return Scheme::MMImplicit;
    if (name == "explicit_kinetic") return Scheme::ExplicitKinetic;
    if (name == "keller_segel") return Scheme::KellerSegel;
    if (name == "odd_even") return Scheme::OddEven;
    throw std::invalid_argument(
        "config: unknown scheme '" + name +
        "' (expected mm_explicit, mm_implicit, explicit_kinetic, keller_segel or odd_even)");
}

DtPolicy policy_from_name(const std::string& name) {
    if (name == "diffusive_sq") return DtPolicy::DiffusiveSq;
    if (name == "kinetic") return DtPolicy::Kinetic;
    if (name == "macroscopic") return DtPolicy::Macroscopic;
    if (name == "odd_even_macroscopic") return DtPolicy::OddEvenMacroscopic;
    if (name == "fixed") return DtPolicy::Fixed;
    throw std::invalid_argument(
        "config: unknown dt_policy '" + name +
        "' (expected diffusive_sq, kinetic, macroscopic, odd_even_macroscopic or fixed)");
}

std::vector<double> snapshot_schedule(const RunConfig& cfg) {
    std::vector<double> times =
        cfg.snapshot_times.empty() ? std::vector<double>{cfg.t_end} : cfg.snapshot_times;
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                times.end());
    return times;
}

}  // namespace

const char* scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::MMExplicit: return "mm_explicit";
        case Scheme::MMImplicit: return "mm_implicit";
        case Scheme::ExplicitKinetic: return "explicit_kinetic";
        case Scheme::KellerSegel: return "keller_segel";
        case Scheme::OddEven: return "odd_even";
    }
    return "?";
}

const char* dt_policy_name(DtPolicy policy) {
    switch (policy) {
        case DtPolicy::DiffusiveSq: return "diffusive_sq";
        case DtPolicy::Kinetic: return "kinetic";
        case DtPolicy::Macroscopic: return "macroscopic";
        case DtPolicy::OddEvenMacroscopic: return "odd_even_macroscopic";
        case DtPolicy::Fixed: return "fixed";
    }
    return "?";
}

double grid_dx(const RunConfig& cfg) { return (cfg.x_max - cfg.x_min) / cfg.Nx; }

double dt_from_policy(const RunConfig& cfg) {
    const double dx = grid_dx(cfg);
    switch (cfg.dt_policy) {
        case DtPolicy::DiffusiveSq: return dx * dx / 2.0;
        case DtPolicy::Kinetic: return cfg.eps * dx / 2.0;
        case DtPolicy::Macroscopic: return dx / 2.0;
        case DtPolicy::OddEvenMacroscopic: return dx / 40.0;
        case DtPolicy::Fixed: return cfg.dt_fixed;
    }
    return 0.0;
}

void validate_config(const RunConfig& cfg) {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (cfg.Nx < 2) fail("Nx must be at least 2");
    if (cfg.Nv < 2) fail("Nv must be at least 2");
    if (!(cfg.x_max > cfg.x_min)) fail("x bounds are degenerate");
    if (!(cfg.v_max > cfg.v_min)) fail("v bounds are degenerate");
    if (std::abs(cfg.v_min + cfg.v_max) > 1e-12 * std::max(1.0, cfg.v_max))
        fail("velocity bounds must be symmetric");
    if (!(cfg.eps > 0.0)) fail("eps must be positive");
    if (!(cfg.t_end >= 0.0)) fail("t_end must be non-negative");
    if (!(cfg.total_mass > 0.0)) fail("total_mass must be positive");
    if (!(cfg.sigma > 0.0)) fail("sigma must be positive");
    if (!(cfg.reaction.D_S > 0.0)) fail("D_S must be positive");
    if (cfg.reaction.a < 0.0 || cfg.reaction.b < 0.0) fail("reaction rates must be non-negative");
    if (cfg.dt_policy == DtPolicy::Fixed && !(cfg.dt_fixed > 0.0))
        fail("fixed dt_policy needs a positive dt");
    if (cfg.scheme == Scheme::OddEven) {
        if (cfg.Nv % 2 != 0) fail("odd_even needs an even Nv (a node at v = 0)");
        if (cfg.sigma != 1.0) fail("odd_even is specialized to sigma = 1");
        if (std::abs(cfg.v_min + 1.0) > 1e-12 || std::abs(cfg.v_max - 1.0) > 1e-12)
            fail("odd_even is specialized to velocity bounds [-1, 1]");
    }
    for (double t : cfg.snapshot_times)
        if (t < -1e-12 || t > cfg.t_end + 1e-12) fail("snapshot time outside [0, t_end]");
}

RunConfig config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config parse: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");

    RunConfig cfg;
    for (const auto& [key, val] : j.items()) {
        try {
            if (key == "scheme") cfg.scheme = scheme_from_name(val.get<std::string>());
            else if (key == "eps") cfg.eps = val.get<double>();
            else if (key == "Nx") cfg.Nx = val.get<int>();
            else if (key == "Nv") cfg.Nv = val.get<int>();
            else if (key == "x_min") cfg.x_min = val.get<double>();
            else if (key == "x_max") cfg.x_max = val.get<double>();
            else if (key == "v_min") cfg.v_min = val.get<double>();
            else if (key == "v_max") cfg.v_max = val.get<double>();
            else if (key == "t_end") cfg.t_end = val.get<double>();
            else if (key == "dt_policy") cfg.dt_policy = policy_from_name(val.get<std::string>());
            else if (key == "dt") cfg.dt_fixed = val.get<double>();
            else if (key == "total_mass") cfg.total_mass = val.get<double>();
            else if (key == "D_S") cfg.reaction.D_S = val.get<double>();
            else if (key == "a") cfg.reaction.a = val.get<double>();
            else if (key == "b") cfg.reaction.b = val.get<double>();
            else if (key == "sigma") cfg.sigma = val.get<double>();
            else if (key == "project") cfg.project = val.get<bool>();
            else if (key == "snapshot_times") cfg.snapshot_times = val.get<std::vector<double>>();
            else if (key == "output") cfg.output = val.get<std::string>();
            else throw std::invalid_argument("config: unknown key '" + key + "'");
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("config field '" + key + "': " + e.what());
        }
    }
    return cfg;
}

void apply_auto_mm(RunConfig& cfg) {
    // The frozen-coefficient bound puts the macroscopic step inside the
    // stable region once eps - 2 eps^2 <= sigma dx / 2; the drift coupling
    // erodes borderline cases, so only claim it with a factor-2 margin and
    // send the rest to the unconditionally stable kinetic step.
    const double dx = grid_dx(cfg);
    if (cfg.eps - 2.0 * cfg.eps * cfg.eps <= cfg.sigma * dx / 4.0) {
        cfg.scheme = Scheme::MMImplicit;
        cfg.dt_policy = DtPolicy::Macroscopic;
    } else {
        cfg.scheme = Scheme::MMExplicit;
        cfg.dt_policy = DtPolicy::Kinetic;
    }
}

double relative_l2(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double w = (i == 0 || i + 1 == a.size()) ? 0.5 : 1.0;
        num += w * (a[i] - b[i]) * (a[i] - b[i]);
        den += w * b[i] * b[i];
    }
    return std::sqrt(num / den);
}

Simulator::Simulator(RunConfig cfg) : cfg_(std::move(cfg)) {
    validate_config(cfg_);
    grid_ = build_spatial_grid(cfg_.x_min, cfg_.x_max, cfg_.Nx);
    vgrid_ = build_velocity_grid(cfg_.v_min, cfg_.v_max, cfg_.Nv);
    model_ = make_run_tumble_model(vgrid_, cfg_.sigma);
    dt_ = dt_from_policy(cfg_);

    switch (cfg_.scheme) {
        case Scheme::MMExplicit:
        case Scheme::MMImplicit:
            macro_mode_ = cfg_.scheme == Scheme::MMExplicit ? MacroMode::Explicit
                                                            : MacroMode::Implicit;
            mm_ = initialize(grid_, vgrid_, model_, cfg_.total_mass, cfg_.eps);
            if (cfg_.project) {
                std::fill(mm_.g.begin(), mm_.g.end(), 0.0);
                apply_ghost_faces(mm_, vgrid_, model_);
            }
            break;
        case Scheme::ExplicitKinetic:
            kin_ = initialize_kinetic(grid_, vgrid_, model_, cfg_.total_mass, cfg_.eps,
                                      cfg_.project);
            break;
        case Scheme::OddEven:
            par_ = initialize_parity(grid_, vgrid_, cfg_.total_mass, cfg_.eps, cfg_.project);
            break;
        case Scheme::KellerSegel: {
            auto seeded = initialize_kinetic(grid_, vgrid_, model_, cfg_.total_mass, 1.0, true);
            n_ = kinetic_density(seeded, vgrid_);
            S_.assign(grid_.Nx + 1, 0.0);
            D_ = diffusion_coefficient(model_, vgrid_);
            chi_ = drift_coefficient(1.0, model_, vgrid_);
            break;
        }
    }
    refresh_fields();
    prev_n_ = n_;
    prev_S_ = S_;
    prev_t_ = t_;
}

void Simulator::refresh_fields() {
    switch (cfg_.scheme) {
        case Scheme::MMExplicit:
        case Scheme::MMImplicit:
            n_ = mm_.n;
            S_ = mm_.S;
            t_ = mm_.t;
            break;
        case Scheme::ExplicitKinetic:
            n_ = kinetic_density(kin_, vgrid_);
            S_ = kin_.S;
            t_ = kin_.t;
            break;
        case Scheme::OddEven:
            n_ = parity_density(par_, vgrid_);
            S_ = par_.S;
            t_ = par_.t;
            break;
        case Scheme::KellerSegel:
            break;  // n_, S_ are the state itself
    }
}

bool Simulator::advance(double dt) {
    if (!healthy_) return false;
    prev_n_ = n_;
    prev_S_ = S_;
    prev_t_ = t_;
    switch (cfg_.scheme) {
        case Scheme::MMExplicit:
        case Scheme::MMImplicit: {
            const StepReport rep =
                step(mm_, grid_, vgrid_, model_, cfg_.reaction, dt, macro_mode_, &cache_);
            flux_accum_ += rep.boundary_flux;
            healthy_ = std::isfinite(rep.max_abs_g) && rep.max_abs_g < 1e100;
            break;
        }
        case Scheme::ExplicitKinetic:
            healthy_ = explicit_kinetic_step(kin_, grid_, vgrid_, model_, cfg_.reaction, dt);
            break;
        case Scheme::OddEven:
            healthy_ = odd_even_step(par_, grid_, vgrid_, cfg_.reaction, dt);
            break;
        case Scheme::KellerSegel:
            healthy_ = ks_step(n_, S_, grid_, cfg_.reaction, dt, D_, chi_, true);
            t_ += dt;
            break;
    }
    refresh_fields();
    healthy_ = healthy_ && finite_profile(n_);
    return healthy_;
}

bool Simulator::advance_to(double target) {
    if (target < t_ - 1e-12 * std::max(1.0, std::abs(target)))
        throw std::invalid_argument("advance_to: target lies in the past");
    while (healthy_) {
        const double rem = target - t_;
        if (rem <= dt_ * 1e-9) break;
        advance(std::min(dt_, rem));
    }
    if (!healthy_) return false;
    // pin the clock so snapshot times compare exactly across schemes
    t_ = target;
    switch (cfg_.scheme) {
        case Scheme::MMExplicit:
        case Scheme::MMImplicit: mm_.t = target; break;
        case Scheme::ExplicitKinetic: kin_.t = target; break;
        case Scheme::OddEven: par_.t = target; break;
        case Scheme::KellerSegel: break;
    }
    return true;
}

std::vector<double> Simulator::distribution() const {
    const int Nv = vgrid_.Nv;
    std::vector<double> f;
    switch (cfg_.scheme) {
        case Scheme::MMExplicit:
        case Scheme::MMImplicit:
            f.resize(static_cast<size_t>(grid_.Nx + 1) * (Nv + 1));
            for (int i = 0; i <= grid_.Nx; ++i)
                for (int j = 0; j <= Nv; ++j)
                    f[static_cast<size_t>(i) * (Nv + 1) + j] =
                        model_.M[j] * mm_.n[i] +
                        cfg_.eps * 0.5 * (mm_.g_face(i - 1)[j] + mm_.g_face(i)[j]);
            break;
        case Scheme::ExplicitKinetic:
            f = kin_.f;
            break;
        case Scheme::OddEven: {
            f.resize(static_cast<size_t>(grid_.Nx + 1) * (Nv + 1));
            VelocityProfile r(par_.Np), jj(par_.Np);
            for (int i = 0; i <= grid_.Nx; ++i) {
                std::copy(par_.r_node(i), par_.r_node(i) + par_.Np, r.begin());
                std::copy(par_.j_node(i), par_.j_node(i) + par_.Np, jj.begin());
                const auto fi = parity_reconstruct(r, jj, vgrid_, cfg_.eps);
                std::copy(fi.begin(), fi.end(), f.begin() + static_cast<size_t>(i) * (Nv + 1));
            }
            break;
        }
        case Scheme::KellerSegel:
            break;
    }
    return f;
}

double Simulator::mass() const { return node_mass(n_, grid_.dx); }

Snapshot Simulator::last_finite() const { return Snapshot{prev_t_, prev_n_, prev_S_, {}}; }

namespace {

void write_snapshot_csv(const std::string& path, const SpatialGrid& grid, int Nv,
                        const Snapshot& snap) {
    std::vector<std::string> header{"x", "n", "S"};
    std::vector<const std::vector<double>*> cols{&grid.nodes, &snap.n, &snap.S};
    std::vector<std::vector<double>> fcols;
    if (!snap.f.empty()) {
        fcols.resize(Nv + 1, std::vector<double>(grid.Nx + 1));
        for (int j = 0; j <= Nv; ++j) {
            header.push_back("f_" + std::to_string(j));
            for (int i = 0; i <= grid.Nx; ++i)
                fcols[j][i] = snap.f[static_cast<size_t>(i) * (Nv + 1) + j];
        }
        for (auto& c : fcols) cols.push_back(&c);
    }
    write_csv(path, header, cols);
}

}  // namespace

RunResult run(const RunConfig& cfg) {
    Simulator sim(cfg);
    const auto times = snapshot_schedule(cfg);

    RunResult res;
    res.mass_initial = sim.mass();
    for (double target : times) {
        if (!sim.advance_to(target)) {
            res.blew_up = true;
            res.diagnostic = std::string("blow-up: ") + scheme_name(cfg.scheme) + " at eps = " +
                             fmt6(cfg.eps) + " lost finiteness near t = " +
                             fmt6(sim.last_finite().t) + " (requested t = " + fmt6(target) + ")";
            res.snapshots.push_back(sim.last_finite());
            break;
        }
        res.snapshots.push_back(
            Snapshot{sim.time(), sim.density(), sim.chemoattractant(), sim.distribution()});
    }
    res.mass_final = node_mass(res.snapshots.back().n, sim.grid().dx);
    res.flux_accumulated = sim.flux_accumulated();

    if (!cfg.output.empty())
        for (size_t k = 0; k < res.snapshots.size(); ++k)
            write_snapshot_csv(cfg.output + "_t" + std::to_string(k) + ".csv", sim.grid(),
                               sim.velocity_grid().Nv, res.snapshots[k]);
    return res;
}

std::vector<ConvergenceReport> convergence_study(const RunConfig& base,
                                                 const std::vector<double>& eps_list,
                                                 const std::vector<int>& nx_list, double t) {
    if (nx_list.size() < 2)
        throw std::invalid_argument("convergence study needs at least two grids");
    for (size_t k = 1; k < nx_list.size(); ++k)
        if (nx_list[k] % nx_list[k - 1] != 0 || nx_list[k] < nx_list[k - 1])
            throw std::invalid_argument("convergence grids must nest (each Nx a multiple of "
                                        "the previous one)");

    struct GridRun {
        double dx = 0.0;
        std::vector<double> n, f;
        double n0_norm = 0.0, f0_norm = 0.0;
    };

    std::vector<ConvergenceReport> reports;
    for (size_t e = 0; e < eps_list.size(); ++e) {
        ConvergenceReport rep;
        rep.eps = eps_list[e];

        std::vector<GridRun> runs;
        for (int nx : nx_list) {
            RunConfig cfg = base;
            cfg.eps = eps_list[e];
            cfg.Nx = nx;
            cfg.t_end = t;
            cfg.snapshot_times.clear();
            cfg.output.clear();

            Simulator sim(cfg);
            GridRun gr;
            gr.dx = sim.grid().dx;
            gr.n0_norm = node_norm(sim.density(), gr.dx);
            auto f0 = sim.distribution();
            if (!f0.empty()) gr.f0_norm = dist_norm(f0, nx, sim.velocity_grid(), gr.dx);
            const bool ok = sim.advance_to(t);
            gr.n = sim.density();
            gr.f = sim.distribution();
            if (!ok) gr.n.assign(gr.n.size(), kNaN);
            runs.push_back(std::move(gr));
        }

        for (size_t k = 1; k < nx_list.size(); ++k) {
            const auto& coarse = runs[k - 1];
            const auto& fine = runs[k];
            const int ratio = nx_list[k] / nx_list[k - 1];
            const int nv1 = base.Nv + 1;

            ConvergenceRow row;
            row.Nx = nx_list[k];

            std::vector<double> dn(coarse.n.size());
            for (size_t i = 0; i < dn.size(); ++i) dn[i] = fine.n[i * ratio] - coarse.n[i];
            row.error_n = node_norm(dn, coarse.dx) / coarse.n0_norm;

            row.error_f = kNaN;
            if (!coarse.f.empty() && coarse.f0_norm > 0.0) {
                std::vector<double> df(coarse.f.size());
                for (size_t i = 0; i < coarse.n.size(); ++i)
                    for (int j = 0; j < nv1; ++j)
                        df[i * nv1 + j] = fine.f[i * ratio * nv1 + j] - coarse.f[i * nv1 + j];
                row.error_f = dist_norm(df, nx_list[k - 1],
                                        build_velocity_grid(base.v_min, base.v_max, base.Nv),
                                        coarse.dx) /
                              coarse.f0_norm;
            }

            row.order_n = kNaN;
            row.order_f = kNaN;
            if (!rep.rows.empty()) {
                row.order_n = std::log2(rep.rows.back().error_n / row.error_n);
                row.order_f = std::log2(rep.rows.back().error_f / row.error_f);
            }
            rep.rows.push_back(row);
        }

        if (!base.output.empty()) {
            std::vector<double> col_nx, col_e, col_o;
            for (const auto& row : rep.rows) {
                col_nx.push_back(row.Nx);
                col_e.push_back(row.error_n);
                col_o.push_back(row.order_n);
            }
            write_csv(base.output + "_converge_eps" + std::to_string(e) + ".csv",
                      {"Nx", "error", "order"}, {&col_nx, &col_e, &col_o});
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

SweepResult regime_sweep(const RunConfig& base, const std::vector<double>& eps_list) {
    SweepResult res;
    res.eps_list = eps_list;

    for (double eps : eps_list) {
        RunConfig cfg = base;
        cfg.eps = eps;
        apply_auto_mm(cfg);
        cfg.snapshot_times.clear();
        cfg.output.clear();
        Simulator sim(cfg);
        if (res.x.empty()) res.x = sim.grid().nodes;
        if (!sim.advance_to(cfg.t_end))
            throw std::runtime_error("regime sweep: micro-macro run blew up at eps = " +
                                     fmt6(eps));
        res.n.push_back(sim.density());
    }

    RunConfig ks = base;
    ks.scheme = Scheme::KellerSegel;
    ks.dt_policy = DtPolicy::Macroscopic;
    ks.snapshot_times.clear();
    ks.output.clear();
    Simulator sim(ks);
    if (!sim.advance_to(ks.t_end)) throw std::runtime_error("regime sweep: Keller-Segel blew up");
    res.n_ks = sim.density();

    for (const auto& n : res.n) res.dist_ks.push_back(relative_l2(n, res.n_ks));

    if (!base.output.empty()) {
        std::vector<std::string> header{"x"};
        std::vector<const std::vector<double>*> cols{&res.x};
        for (size_t e = 0; e < eps_list.size(); ++e) {
            header.push_back("n_" + fmt6(eps_list[e]));
            cols.push_back(&res.n[e]);
        }
        header.push_back("n_ks");
        cols.push_back(&res.n_ks);
        write_csv(base.output + "_sweep.csv", header, cols);
    }
    return res;
}

ComparisonResult scheme_comparison(const RunConfig& base) {
    std::vector<RunConfig> cfgs;
    ComparisonResult res;

    if (base.eps >= 0.5) {
        RunConfig mm = base;
        mm.scheme = Scheme::MMExplicit;
        mm.dt_policy = DtPolicy::Kinetic;
        mm.project = false;
        RunConfig kin = base;
        kin.scheme = Scheme::ExplicitKinetic;
        kin.dt_policy = DtPolicy::Kinetic;
        kin.project = true;
        RunConfig oe = base;
        oe.scheme = Scheme::OddEven;
        oe.dt_policy = DtPolicy::OddEvenMacroscopic;
        oe.project = true;
        cfgs = {mm, kin, oe};
        res.labels = {"mm", "explicit_kinetic", "odd_even"};
    } else {
        RunConfig mm = base;
        apply_auto_mm(mm);
        mm.project = false;
        RunConfig oe = base;
        oe.scheme = Scheme::OddEven;
        oe.dt_policy = DtPolicy::OddEvenMacroscopic;
        oe.project = false;
        RunConfig ks = base;
        ks.scheme = Scheme::KellerSegel;
        ks.dt_policy = DtPolicy::Macroscopic;
        cfgs = {mm, oe, ks};
        res.labels = {"mm", "odd_even", "keller_segel"};
    }

    for (auto& cfg : cfgs) {
        cfg.snapshot_times.clear();
        cfg.output.clear();
        Simulator sim(cfg);
        if (res.x.empty()) res.x = sim.grid().nodes;
        if (!sim.advance_to(cfg.t_end))
            throw std::runtime_error(std::string("scheme comparison: ") +
                                     scheme_name(cfg.scheme) + " blew up");
        res.n.push_back(sim.density());
    }

    res.dist.assign(res.n.size(), std::vector<double>(res.n.size(), 0.0));
    for (size_t i = 0; i < res.n.size(); ++i)
        for (size_t j = 0; j < res.n.size(); ++j)
            if (i != j) res.dist[i][j] = relative_l2(res.n[i], res.n[j]);

    if (!base.output.empty()) {
        std::vector<std::string> header{"x"};
        std::vector<const std::vector<double>*> cols{&res.x};
        for (size_t i = 0; i < res.n.size(); ++i) {
            header.push_back("n_" + res.labels[i]);
            cols.push_back(&res.n[i]);
        }
        write_csv(base.output + "_compare.csv", header, cols);
    }
    return res;
}

EvolutionResult evolution_study(const RunConfig& base, const std::vector<double>& times) {
    RunConfig cfg = base;
    apply_auto_mm(cfg);
    cfg.snapshot_times = times;
    if (!times.empty()) cfg.t_end = *std::max_element(times.begin(), times.end());
    cfg.output.clear();

    const RunResult rr = run(cfg);

    EvolutionResult res;
    res.mass_initial = rr.mass_initial;
    res.mass_final = rr.mass_final;
    res.flux_accumulated = rr.flux_accumulated;
    res.blew_up = rr.blew_up;
    res.x = build_spatial_grid(cfg.x_min, cfg.x_max, cfg.Nx).nodes;
    const double dx = grid_dx(cfg);
    for (const auto& snap : rr.snapshots) {
        res.times.push_back(snap.t);
        res.n.push_back(snap.n);
    }
    for (size_t m = 0; m + 1 < res.n.size(); ++m) {
        std::vector<double> d(res.n[m].size());
        for (size_t i = 0; i < d.size(); ++i) d[i] = res.n[m + 1][i] - res.n[m][i];
        res.diffs.push_back(node_norm(d, dx));
    }

    if (!base.output.empty()) {
        std::vector<std::string> header{"x"};
        std::vector<const std::vector<double>*> cols{&res.x};
        for (size_t m = 0; m < res.n.size(); ++m) {
            header.push_back("n_t" + fmt6(res.times[m]));
            cols.push_back(&res.n[m]);
        }
        write_csv(base.output + "_evolve.csv", header, cols);
    }
    return res;
}

std::string report_text(const RunResult& r) {
    std::string out;
    out += "snapshots: " + std::to_string(r.snapshots.size()) + "\n";
    for (const auto& s : r.snapshots) {
        double peak = 0.0;
        for (double x : s.n) peak = std::max(peak, std::abs(x));
        out += "  t = " + fmt6(s.t) + "  max|n| = " + fmt6(peak) + "\n";
    }
    out += "mass: initial " + fmt6(r.mass_initial) + ", final " + fmt6(r.mass_final) +
           ", boundary flux " + fmt6(r.flux_accumulated) + "\n";
    if (r.blew_up) out += r.diagnostic + "\n";
    return out;
}

std::string report_text(const std::vector<ConvergenceReport>& reports) {
    std::string out;
    for (const auto& rep : reports) {
        out += "eps = " + fmt6(rep.eps) + "\n";
        for (const auto& row : rep.rows) {
            out += "  Nx = " + std::to_string(row.Nx) + "  e_n = " + fmt6(row.error_n) +
                   "  order_n = " + fmt6(row.order_n) + "  e_f = " + fmt6(row.error_f) +
                   "  order_f = " + fmt6(row.order_f) + "\n";
        }
    }
    return out;
}

std::string report_text(const SweepResult& r) {
    std::string out;
    for (size_t e = 0; e < r.eps_list.size(); ++e)
        out += "eps = " + fmt6(r.eps_list[e]) +
               "  rel-L2 vs Keller-Segel = " + fmt6(r.dist_ks[e]) + "\n";
    return out;
}

std::string report_text(const ComparisonResult& r) {
    std::string out;
    for (size_t i = 0; i < r.labels.size(); ++i)
        for (size_t j = i + 1; j < r.labels.size(); ++j)
            out += "rel-L2(" + r.labels[i] + ", " + r.labels[j] + ") = " + fmt6(r.dist[i][j]) +
                   "\n";
    return out;
}

std::string report_text(const EvolutionResult& r) {
    std::string out;
    for (size_t m = 0; m < r.diffs.size(); ++m)
        out += "||n(t=" + fmt6(r.times[m + 1]) + ") - n(t=" + fmt6(r.times[m]) +
               ")||_2 = " + fmt6(r.diffs[m]) + "\n";
    const double drift = std::abs((r.mass_final - r.mass_initial) - r.flux_accumulated);
    out += "mass: initial " + fmt6(r.mass_initial) + ", final " + fmt6(r.mass_final) +
           ", boundary flux " + fmt6(r.flux_accumulated) + ", audit residual " + fmt6(drift) +
           "\n";
    if (r.blew_up) out += "blow-up during the run\n";
    return out;
}

}  // namespace chemotaxis
