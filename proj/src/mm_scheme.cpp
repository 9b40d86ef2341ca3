#include "chemotaxis/mm_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chemotaxis {

namespace {

double weighted_node_sum(const std::vector<double>& u) {
    double s = 0.5 * (u.front() + u.back());
    for (size_t i = 1; i + 1 < u.size(); ++i) s += u[i];
    return s;
}

// bracket(v * profile) for a raw face pointer
double flux_bracket(const double* gf, const VelocityGrid& vgrid,
                    const std::vector<double>& w) {
    double s = 0.0;
    for (int j = 0; j <= vgrid.Nv; ++j) s += w[j] * vgrid.nodes[j] * gf[j];
    return s;
}

}  // namespace

MMState initialize(const SpatialGrid& grid, const VelocityGrid& vgrid,
                   const TurningModel& model, double total_mass, double eps) {
    if (total_mass <= 0.0) throw std::invalid_argument("initialize: total mass must be positive");
    if (eps <= 0.0) throw std::invalid_argument("initialize: eps must be positive");

    MMState st;
    st.Nx = grid.Nx;
    st.Nv = vgrid.Nv;
    st.eps = eps;
    st.n.resize(grid.Nx + 1);
    st.S.assign(grid.Nx + 1, 0.0);
    st.g.assign(static_cast<size_t>(grid.Nx + 2) * (vgrid.Nv + 1), 0.0);
    st.f_left.assign(vgrid.Nv + 1, 0.0);
    st.f_right.assign(vgrid.Nv + 1, 0.0);

    for (int i = 0; i <= grid.Nx; ++i) st.n[i] = std::exp(-80.0 * grid.nodes[i] * grid.nodes[i]);
    const double cm = total_mass / (grid.dx * weighted_node_sum(st.n));
    for (auto& v : st.n) v *= cm;

    // f_0 = (n_0 + v e^{-v^2}/C_M) M; the density part cancels in g_0, so the
    // seed perturbation is the same profile at every interior face
    VelocityProfile g0(vgrid.Nv + 1);
    for (int j = 0; j <= vgrid.Nv; ++j) {
        const double v = vgrid.nodes[j];
        g0[j] = v * std::exp(-v * v) * model.M[j] / (cm * eps);
    }
    for (int i = 0; i < grid.Nx; ++i)
        std::copy(g0.begin(), g0.end(), st.g_face(i));
    apply_ghost_faces(st, vgrid, model);
    return st;
}

double total_mass(const MMState& state, const SpatialGrid& grid) {
    return grid.dx * weighted_node_sum(state.n);
}

void micro_step(MMState& state, const SpatialGrid& grid, const VelocityGrid& vgrid,
                const TurningModel& model, double dt, MicroSolver* cache) {
    const int Nx = grid.Nx, Nv = vgrid.Nv;
    const double eps = state.eps, dx = grid.dx;
    const double dte = dt / eps, dte2 = dt / (eps * eps);
    const auto w = bracket_weights(vgrid);

    MicroSolver local;
    MicroSolver* solver = nullptr;
    if (!model.relaxation) {
        solver = cache ? cache : &local;
        if (solver->dt != dt) {
            auto A = t0_matrix(model, vgrid);
            const int n = Nv + 1;
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l)
                    A[j * n + l] = (j == l ? 1.0 : 0.0) - dte2 * A[j * n + l];
            solver->lu = lu_factor(std::move(A), n);
            solver->dt = dt;
        }
    }

    std::vector<double> g_new(static_cast<size_t>(Nx) * (Nv + 1));
    VelocityProfile R(Nv + 1), gc(Nv + 1);
    for (int i = 0; i < Nx; ++i) {
        const double* gm = state.g_face(i - 1);
        const double* gcp = state.g_face(i);
        const double* gp = state.g_face(i + 1);
        std::copy(gcp, gcp + Nv + 1, gc.begin());

        // projected upwind transport of g
        double tmean = 0.0;
        for (int j = 0; j <= Nv; ++j) {
            const double v = vgrid.nodes[j];
            const double up = std::max(v, 0.0) * (gc[j] - gm[j]) / dx;
            const double dn = std::min(v, 0.0) * (gp[j] - gc[j]) / dx;
            R[j] = up + dn;
            tmean += w[j] * R[j];
        }

        const double dS = (state.S[i + 1] - state.S[i]) / dx;
        const double n_face = 0.5 * (state.n[i] + state.n[i + 1]);
        const double dn_face = (state.n[i + 1] - state.n[i]) / dx;
        auto t1M = apply_T1(dS, model.M, model, vgrid);
        auto t1g = apply_T1(dS, gc, model, vgrid);

        for (int j = 0; j <= Nv; ++j) {
            const double v = vgrid.nodes[j];
            const double transport = R[j] - model.M[j] * tmean;
            R[j] = gc[j] - dte * transport +
                   dte2 * (t1M[j] * n_face - v * model.M[j] * dn_face) + dte * t1g[j];
        }

        double* out = g_new.data() + static_cast<size_t>(i) * (Nv + 1);
        if (model.relaxation) {
            double rmean = 0.0;
            for (int j = 0; j <= Nv; ++j) rmean += w[j] * R[j];
            const double relax = 1.0 + model.sigma * dte2;
            for (int j = 0; j <= Nv; ++j) {
                const double proj = model.M[j] * rmean;
                out[j] = proj + (R[j] - proj) / relax;
            }
        } else {
            auto sol = lu_solve(solver->lu, R);
            std::copy(sol.begin(), sol.end(), out);
        }
    }
    std::copy(g_new.begin(), g_new.end(), state.g_face(0));
}

void macro_step_explicit(MMState& state, const SpatialGrid& grid, const VelocityGrid& vgrid,
                         double dt) {
    const int Nx = grid.Nx;
    const auto w = bracket_weights(vgrid);
    std::vector<double> flux(Nx);
    for (int i = 0; i < Nx; ++i) flux[i] = flux_bracket(state.g_face(i), vgrid, w);
    for (int i = 1; i < Nx; ++i) state.n[i] -= dt * (flux[i] - flux[i - 1]) / grid.dx;
}

void macro_step_implicit(MMState& state, std::pair<double, double> boundary,
                         const SpatialGrid& grid, const VelocityGrid& vgrid,
                         const TurningModel& model, double dt) {
    const int Nx = grid.Nx, Nv = vgrid.Nv;
    const double eps = state.eps, dx = grid.dx;
    const double coef = dt / (eps * eps + model.sigma * dt);
    const auto w = bracket_weights(vgrid);

    const double d2 = diffusion_coefficient(model, vgrid) * model.sigma;  // bracket(v^2 M)
    const double alpha = dt * dt * d2 / ((eps * eps + model.sigma * dt) * dx * dx);

    // fluxes of ghat = g + coef * v M dn/dx on the interior faces
    std::vector<double> flux(Nx);
    for (int i = 0; i < Nx; ++i) {
        const double dn = (state.n[i + 1] - state.n[i]) / dx;
        const double* gf = state.g_face(i);
        double s = 0.0;
        for (int j = 0; j <= Nv; ++j) {
            const double v = vgrid.nodes[j];
            s += w[j] * v * (gf[j] + coef * v * model.M[j] * dn);
        }
        flux[i] = s;
    }

    const int m = Nx - 1;  // unknowns at nodes 1..Nx-1
    TridiagonalSystem sys;
    sys.sub.assign(m - 1, -alpha);
    sys.super.assign(m - 1, -alpha);
    sys.diag.assign(m, 1.0 + 2.0 * alpha);
    sys.rhs.resize(m);
    for (int i = 1; i < Nx; ++i)
        sys.rhs[i - 1] = state.n[i] - dt * (flux[i] - flux[i - 1]) / dx;
    sys.rhs[0] += alpha * boundary.first;
    sys.rhs[m - 1] += alpha * boundary.second;

    auto sol = thomas_solve(std::move(sys));
    for (int i = 1; i < Nx; ++i) state.n[i] = sol[i - 1];
}

std::pair<double, double> apply_boundary_density(const MMState& state, const SpatialGrid& grid,
                                                 const VelocityGrid& vgrid,
                                                 const TurningModel& model, double dt) {
    const int Nx = grid.Nx, Nv = vgrid.Nv;
    const double eps = state.eps, dx = grid.dx;
    const auto w = bracket_weights(vgrid);

    double beta_l = 0.0, num_l = 0.0, beta_r = 0.0, num_r = 0.0;
    const double* gl = state.g_face(0);
    const double* gr = state.g_face(Nx - 1);
    for (int j = 0; j <= Nv; ++j) {
        const double v = vgrid.nodes[j];
        const double vp = std::max(v, 0.0), vm = std::min(v, 0.0);
        beta_l += w[j] * vp * model.M[j];
        num_l += w[j] * (2.0 * vp * gl[j] - (2.0 * vp / eps) * state.f_left[j]);
        beta_r += w[j] * vm * model.M[j];
        num_r += w[j] * ((2.0 * vm / eps) * state.f_right[j] - 2.0 * vm * gr[j]);
    }
    const double n0 = (state.n[0] - dt / dx * num_l) / (1.0 + (2.0 * dt / (eps * dx)) * beta_l);
    const double nN = (state.n[Nx] - dt / dx * num_r) / (1.0 - (2.0 * dt / (eps * dx)) * beta_r);
    return {n0, nN};
}

void apply_ghost_faces(MMState& state, const VelocityGrid& vgrid, const TurningModel& model) {
    const int Nx = state.Nx, Nv = state.Nv;
    const double eps = state.eps;
    const double* first = state.g_face(0);
    const double* last = state.g_face(Nx - 1);
    double* gl = state.g_face(-1);
    double* gr = state.g_face(Nx);
    for (int j = 0; j <= Nv; ++j) {
        const double v = vgrid.nodes[j];
        gl[j] = (v > 0.0)
                    ? (2.0 / eps) * (state.f_left[j] - state.n[0] * model.M[j]) - first[j]
                    : first[j];
        gr[j] = (v < 0.0)
                    ? (2.0 / eps) * (state.f_right[j] - state.n[Nx] * model.M[j]) - last[j]
                    : last[j];
    }
}

StepReport step(MMState& state, const SpatialGrid& grid, const VelocityGrid& vgrid,
                const TurningModel& model, const ReactionParams& reaction, double dt,
                MacroMode mode, MicroSolver* cache) {
    const int Nx = grid.Nx, Nv = vgrid.Nv;
    StepReport report;
    report.mass_before = total_mass(state, grid);
    const double n1_old = state.n[1] - state.n[0];
    const double nN_old = state.n[Nx] - state.n[Nx - 1];

    micro_step(state, grid, vgrid, model, dt, cache);
    const auto boundary = apply_boundary_density(state, grid, vgrid, model, dt);
    if (mode == MacroMode::Explicit)
        macro_step_explicit(state, grid, vgrid, dt);
    else
        macro_step_implicit(state, boundary, grid, vgrid, model, dt);
    state.n[0] = boundary.first;
    state.n[Nx] = boundary.second;
    apply_ghost_faces(state, vgrid, model);

    report.mass_after = total_mass(state, grid);
    const auto w = bracket_weights(vgrid);
    for (int i = 0; i < Nx; ++i) {
        const double* gf = state.g_face(i);
        for (int j = 0; j <= Nv; ++j) report.max_abs_g = std::max(report.max_abs_g, std::abs(gf[j]));
    }

    // wall flux that exactly telescopes the density update
    double out_r = 0.0, out_l = 0.0;
    const double* grm = state.g_face(Nx - 1);
    const double* grg = state.g_face(Nx);
    const double* glm = state.g_face(0);
    const double* glg = state.g_face(-1);
    for (int j = 0; j <= Nv; ++j) {
        const double v = vgrid.nodes[j];
        out_r += w[j] * v * 0.5 * (grm[j] + grg[j]);
        out_l += w[j] * v * 0.5 * (glm[j] + glg[j]);
    }
    report.boundary_flux = -dt * (out_r - out_l);
    if (mode == MacroMode::Implicit) {
        const double eps = state.eps, dx = grid.dx;
        const double d2 = diffusion_coefficient(model, vgrid) * model.sigma;
        const double cc = dt * dt * d2 / ((eps * eps + model.sigma * dt) * dx);
        const double n1_new = state.n[1] - state.n[0];
        const double nN_new = state.n[Nx] - state.n[Nx - 1];
        report.boundary_flux += cc * ((n1_old - n1_new) + (nN_new - nN_old));
    }

    state.S = chemo_step(state.S, state.n, reaction, grid, dt);
    state.t += dt;
    return report;
}

}  // namespace chemotaxis
