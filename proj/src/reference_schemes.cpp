#include "chemotaxis/reference_schemes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chemotaxis {

namespace {

std::vector<double> gaussian_density(const SpatialGrid& grid, double total_mass) {
    std::vector<double> n(grid.Nx + 1);
    double sum = 0.0;
    for (int i = 0; i <= grid.Nx; ++i) {
        n[i] = std::exp(-80.0 * grid.nodes[i] * grid.nodes[i]);
        sum += (i == 0 || i == grid.Nx) ? 0.5 * n[i] : n[i];
    }
    const double cm = total_mass / (grid.dx * sum);
    for (auto& x : n) x *= cm;
    return n;
}

// centered gradient of S at the nodes, zero at the walls
std::vector<double> node_gradient(const std::vector<double>& S, const SpatialGrid& grid) {
    std::vector<double> d(S.size(), 0.0);
    for (size_t i = 1; i + 1 < S.size(); ++i) d[i] = (S[i + 1] - S[i - 1]) / (2.0 * grid.dx);
    return d;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x) || std::abs(x) > 1e100) return false;
    return true;
}

void check_positive_ic(double total_mass, double eps) {
    if (total_mass <= 0.0) throw std::invalid_argument("initialize: total mass must be positive");
    if (eps <= 0.0) throw std::invalid_argument("initialize: eps must be positive");
}

int positive_offset(const VelocityGrid& grid) {
    if (grid.Nv % 2 != 0)
        throw std::invalid_argument("parity decomposition needs a velocity node at v = 0");
    return grid.Nv / 2;
}

}  // namespace

std::vector<double> half_bracket_weights(const VelocityGrid& grid) {
    const int Np = positive_offset(grid) + 1;
    std::vector<double> w(Np, grid.dv);
    w.front() *= 0.5;
    w.back() *= 0.5;
    w[1] += w[0];
    w[0] = 0.0;
    return w;
}

double half_bracket(const std::vector<double>& r_node, const VelocityGrid& grid) {
    const auto w = half_bracket_weights(grid);
    double s = 0.0;
    for (size_t p = 0; p < w.size(); ++p) s += w[p] * r_node[p];
    return s;
}

KineticState initialize_kinetic(const SpatialGrid& grid, const VelocityGrid& vgrid,
                                const TurningModel& model, double total_mass, double eps,
                                bool project) {
    check_positive_ic(total_mass, eps);
    KineticState st;
    st.Nx = grid.Nx;
    st.Nv = vgrid.Nv;
    st.eps = eps;
    st.S.assign(grid.Nx + 1, 0.0);
    st.f.resize(static_cast<size_t>(grid.Nx + 1) * (vgrid.Nv + 1));

    const auto n0 = gaussian_density(grid, total_mass);
    const double cm = n0[grid.Nx / 2] * std::exp(80.0 * grid.nodes[grid.Nx / 2] * grid.nodes[grid.Nx / 2]);
    for (int i = 0; i <= grid.Nx; ++i)
        for (int j = 0; j <= vgrid.Nv; ++j) {
            const double v = vgrid.nodes[j];
            const double seed = project ? 0.0 : v * std::exp(-v * v) / cm;
            st.f_node(i)[j] = (n0[i] + seed) * model.M[j];
        }
    return st;
}

ParityState initialize_parity(const SpatialGrid& grid, const VelocityGrid& vgrid,
                              double total_mass, double eps, bool project) {
    check_positive_ic(total_mass, eps);
    const int off = positive_offset(vgrid);
    ParityState st;
    st.Nx = grid.Nx;
    st.Np = off + 1;
    st.eps = eps;
    st.S.assign(grid.Nx + 1, 0.0);
    st.r.resize(static_cast<size_t>(grid.Nx + 1) * st.Np);
    st.j.resize(st.r.size());

    const auto n0 = gaussian_density(grid, total_mass);
    const double cm = n0[grid.Nx / 2] * std::exp(80.0 * grid.nodes[grid.Nx / 2] * grid.nodes[grid.Nx / 2]);
    for (int i = 0; i <= grid.Nx; ++i)
        for (int p = 0; p < st.Np; ++p) {
            const double v = vgrid.nodes[off + p];
            st.r_node(i)[p] = 0.5 * n0[i];
            st.j_node(i)[p] = project ? 0.0 : 0.5 * v * std::exp(-v * v) / (cm * eps);
        }
    return st;
}

std::vector<double> kinetic_density(const KineticState& state, const VelocityGrid& vgrid) {
    std::vector<double> n(state.Nx + 1);
    VelocityProfile fi(state.Nv + 1);
    for (int i = 0; i <= state.Nx; ++i) {
        std::copy(state.f_node(i), state.f_node(i) + state.Nv + 1, fi.begin());
        n[i] = bracket(fi, vgrid);
    }
    return n;
}

std::vector<double> parity_density(const ParityState& state, const VelocityGrid& vgrid) {
    const auto w = half_bracket_weights(vgrid);
    std::vector<double> n(state.Nx + 1, 0.0);
    for (int i = 0; i <= state.Nx; ++i)
        for (int p = 0; p < state.Np; ++p) n[i] += 2.0 * w[p] * state.r_node(i)[p];
    return n;
}

std::pair<VelocityProfile, VelocityProfile> parity_transform(const VelocityProfile& f,
                                                             const VelocityGrid& grid,
                                                             double eps) {
    const int off = positive_offset(grid);
    VelocityProfile r(off + 1), j(off + 1);
    for (int p = 0; p <= off; ++p) {
        r[p] = 0.5 * (f[off + p] + f[off - p]);
        j[p] = (f[off + p] - f[off - p]) / (2.0 * eps);
    }
    return {std::move(r), std::move(j)};
}

VelocityProfile parity_reconstruct(const VelocityProfile& r, const VelocityProfile& j,
                                   const VelocityGrid& grid, double eps) {
    const int off = positive_offset(grid);
    VelocityProfile f(grid.Nv + 1);
    f[off] = r[0];
    for (int p = 1; p <= off; ++p) {
        f[off + p] = r[p] + eps * j[p];
        f[off - p] = r[p] - eps * j[p];
    }
    return f;
}

bool explicit_kinetic_step(KineticState& state, const SpatialGrid& grid,
                           const VelocityGrid& vgrid, const TurningModel& model,
                           const ReactionParams& reaction, double dt) {
    const int Nx = grid.Nx, Nv = vgrid.Nv;
    const double eps = state.eps, dx = grid.dx;
    const auto dS = node_gradient(state.S, grid);
    const VelocityProfile inflow(Nv + 1, 0.0);

    std::vector<double> f_new(state.f.size());
    VelocityProfile fi(Nv + 1);
    for (int i = 0; i <= Nx; ++i) {
        const double* fm = (i > 0) ? state.f_node(i - 1) : inflow.data();
        const double* fp = (i < Nx) ? state.f_node(i + 1) : inflow.data();
        std::copy(state.f_node(i), state.f_node(i) + Nv + 1, fi.begin());
        const auto coll = apply_T0(fi, model, vgrid);
        const auto turn = apply_T1(dS[i], fi, model, vgrid);
        double* out = f_new.data() + static_cast<size_t>(i) * (Nv + 1);
        for (int j = 0; j <= Nv; ++j) {
            const double v = vgrid.nodes[j];
            const double transport = std::max(v, 0.0) * (fi[j] - fm[j]) / dx +
                                     std::min(v, 0.0) * (fp[j] - fi[j]) / dx;
            out[j] = fi[j] - dt / eps * transport + dt / (eps * eps) * (coll[j] + eps * turn[j]);
        }
    }
    state.f.swap(f_new);
    const bool ok = all_finite(state.f);
    state.S = chemo_step(state.S, kinetic_density(state, vgrid), reaction, grid, dt);
    state.t += dt;
    return ok;
}

bool ks_step(std::vector<double>& n, std::vector<double>& S, const SpatialGrid& grid,
             const ReactionParams& reaction, double dt, double D, double chi,
             bool implicit_diffusion) {
    const int Nx = grid.Nx;
    const double dx = grid.dx;
    const auto dS = node_gradient(S, grid);

    std::vector<double> drift(Nx + 1, 0.0);
    for (int i = 1; i < Nx; ++i)
        drift[i] = chi * (dS[i + 1] * n[i + 1] - dS[i - 1] * n[i - 1]) / (2.0 * dx);

    std::vector<double> n_new(Nx + 1, 0.0);
    const double c = dt * D / (dx * dx);
    if (!implicit_diffusion) {
        for (int i = 1; i < Nx; ++i)
            n_new[i] = n[i] + c * (n[i + 1] - 2.0 * n[i] + n[i - 1]) - dt * drift[i];
    } else {
        const int m = Nx - 1;
        TridiagonalSystem sys;
        sys.sub.assign(m - 1, -c);
        sys.super.assign(m - 1, -c);
        sys.diag.assign(m, 1.0 + 2.0 * c);
        sys.rhs.resize(m);
        for (int i = 1; i < Nx; ++i) sys.rhs[i - 1] = n[i] - dt * drift[i];
        auto sol = thomas_solve(std::move(sys));
        for (int i = 1; i < Nx; ++i) n_new[i] = sol[i - 1];
    }
    n.swap(n_new);
    const bool ok = all_finite(n);
    S = chemo_step(S, n, reaction, grid, dt);
    return ok;
}

bool odd_even_step(ParityState& state, const SpatialGrid& grid, const VelocityGrid& vgrid,
                   const ReactionParams& reaction, double dt) {
    const int Nx = grid.Nx, Np = state.Np;
    const int off = positive_offset(vgrid);
    const double eps = state.eps, dx = grid.dx;
    const double stiff = dt / (2.0 * eps * eps);
    const auto hw = half_bracket_weights(vgrid);
    const auto dS = node_gradient(state.S, grid);

    std::vector<double> nk(Nx + 1, 0.0);
    for (int i = 0; i <= Nx; ++i)
        for (int p = 0; p < Np; ++p) nk[i] += 2.0 * hw[p] * state.r_node(i)[p];

    // collision: even part first, the odd part reads the relaxed gradient
    std::vector<double> r1(state.r.size()), j1(state.j.size());
    for (int i = 0; i <= Nx; ++i) {
        const double den = 1.0 + stiff * (2.0 + eps * std::abs(dS[i]));
        for (int p = 0; p < Np; ++p) {
            const double v = vgrid.nodes[off + p];
            r1[i * Np + p] =
                (state.r_node(i)[p] + stiff * (1.0 + eps * std::abs(v * dS[i])) * nk[i]) / den;
        }
    }
    for (int i = 0; i <= Nx; ++i) {
        const double den = 1.0 + stiff * (2.0 + eps * std::abs(dS[i]));
        for (int p = 0; p < Np; ++p) {
            const double v = vgrid.nodes[off + p];
            double dr;
            if (i == 0)
                dr = (r1[Np + p] - r1[p]) / dx;
            else if (i == Nx)
                dr = (r1[i * Np + p] - r1[(i - 1) * Np + p]) / dx;
            else
                dr = (r1[(i + 1) * Np + p] - r1[(i - 1) * Np + p]) / (2.0 * dx);
            j1[i * Np + p] = (state.j_node(i)[p] + stiff * v * dS[i] * nk[i] +
                              dt * (1.0 - 1.0 / (eps * eps)) * v * dr) /
                             den;
        }
    }

    // transport of the characteristic variables, second-order upwind
    std::vector<double> wp(Nx + 1), wm(Nx + 1);
    for (int p = 0; p < Np; ++p) {
        const double v = vgrid.nodes[off + p];
        const double cfl = v * dt / dx;
        for (int i = 0; i <= Nx; ++i) {
            wp[i] = r1[i * Np + p] + j1[i * Np + p];
            wm[i] = r1[i * Np + p] - j1[i * Np + p];
        }
        for (int i = Nx; i >= 1; --i) {
            const double d = (i >= 2) ? 0.5 * (3.0 * wp[i] - 4.0 * wp[i - 1] + wp[i - 2])
                                      : wp[1] - wp[0];
            wp[i] -= cfl * d;
        }
        for (int i = 0; i < Nx; ++i) {
            const double d = (i <= Nx - 2) ? 0.5 * (-3.0 * wm[i] + 4.0 * wm[i + 1] - wm[i + 2])
                                           : wm[i + 1] - wm[i];
            wm[i] += cfl * d;
        }
        for (int i = 0; i <= Nx; ++i) {
            state.r_node(i)[p] = 0.5 * (wp[i] + wm[i]);
            state.j_node(i)[p] = 0.5 * (wp[i] - wm[i]);
        }
        // vacuum walls: r -+ eps v dr/dx = 0, one-sided; j from the inflow pair
        const double q = eps * v / (dx + eps * v);
        state.r_node(0)[p] = q * state.r_node(1)[p];
        state.j_node(0)[p] = -state.r_node(0)[p] / eps;
        state.r_node(Nx)[p] = q * state.r_node(Nx - 1)[p];
        state.j_node(Nx)[p] = state.r_node(Nx)[p] / eps;
    }

    const bool ok = all_finite(state.r) && all_finite(state.j);
    state.S = chemo_step(state.S, parity_density(state, vgrid), reaction, grid, dt);
    state.t += dt;
    return ok;
}

}  // namespace chemotaxis
