#pragma once

#include <utility>
#include <vector>

#include "chemotaxis/chemo.hpp"
#include "chemotaxis/grid.hpp"
#include "chemotaxis/kinetic_ops.hpp"

namespace chemotaxis {

// Distribution function on the full node grid, node-major: f[i*(Nv+1) + j].
struct KineticState {
    int Nx = 0;
    int Nv = 0;
    double eps = 1.0;
    double t = 0.0;
    std::vector<double> f;
    std::vector<double> S;

    double* f_node(int i) { return f.data() + static_cast<size_t>(i) * (Nv + 1); }
    const double* f_node(int i) const { return f.data() + static_cast<size_t>(i) * (Nv + 1); }
};

// Even/odd parts on the non-negative velocity nodes v = 0, dv, ..., v_max
// (Np = Nv/2 + 1 entries per spatial node, node-major). The v = 0 entry
// carries zero quadrature weight and zero transport speed; it exists so the
// parity transform is exactly invertible on the full grid.
struct ParityState {
    int Nx = 0;
    int Np = 0;
    double eps = 1.0;
    double t = 0.0;
    std::vector<double> r;
    std::vector<double> j;
    std::vector<double> S;

    double* r_node(int i) { return r.data() + static_cast<size_t>(i) * Np; }
    const double* r_node(int i) const { return r.data() + static_cast<size_t>(i) * Np; }
    double* j_node(int i) { return j.data() + static_cast<size_t>(i) * Np; }
    const double* j_node(int i) const { return j.data() + static_cast<size_t>(i) * Np; }
};

// Quadrature weights for n = 2 * half_bracket(r): dv * (0, 3/2, 1, ..., 1, 1/2)
// over the non-negative nodes. The v=0 half-weight is folded into the first
// positive node so the weights sum to exactly v_max (constants integrate
// exactly, which the collision fixed point needs).
std::vector<double> half_bracket_weights(const VelocityGrid& grid);
double half_bracket(const std::vector<double>& r_node, const VelocityGrid& grid);

// Gaussian peak of the given mass with the odd velocity seed; `project`
// replaces the seeded distribution by M(v) * n_0 (used in the kinetic regime).
KineticState initialize_kinetic(const SpatialGrid& grid, const VelocityGrid& vgrid,
                                const TurningModel& model, double total_mass, double eps,
                                bool project = false);
ParityState initialize_parity(const SpatialGrid& grid, const VelocityGrid& vgrid,
                              double total_mass, double eps, bool project = false);

std::vector<double> kinetic_density(const KineticState& state, const VelocityGrid& vgrid);
std::vector<double> parity_density(const ParityState& state, const VelocityGrid& vgrid);

// (f(v) +- f(-v))/2, the odd part scaled by 1/eps; defined on the
// non-negative nodes. Exact mutual inverses with parity_reconstruct.
std::pair<VelocityProfile, VelocityProfile> parity_transform(const VelocityProfile& f,
                                                             const VelocityGrid& grid,
                                                             double eps);
VelocityProfile parity_reconstruct(const VelocityProfile& r, const VelocityProfile& j,
                                   const VelocityGrid& grid, double eps);

// One forward-Euler step of the kinetic equation: upwind transport, explicit
// stiff collision, zero-inflow ghosts, then the chemoattractant. Returns
// false once the state stops being finite (expected at small eps).
bool explicit_kinetic_step(KineticState& state, const SpatialGrid& grid,
                           const VelocityGrid& vgrid, const TurningModel& model,
                           const ReactionParams& reaction, double dt);

// One step of the limit system: explicit (or backward-Euler) diffusion plus
// the explicit chemotactic drift, homogeneous Dirichlet walls for n.
bool ks_step(std::vector<double>& n, std::vector<double>& S, const SpatialGrid& grid,
             const ReactionParams& reaction, double dt, double D, double chi,
             bool implicit_diffusion);

// Operator-split parity step: pointwise-implicit collision (density lagged,
// the odd update reading the gradient of the freshly relaxed even part),
// second-order upwind transport of the characteristic variables r +- j, then
// Robin wall rows and the chemoattractant.
bool odd_even_step(ParityState& state, const SpatialGrid& grid, const VelocityGrid& vgrid,
                   const ReactionParams& reaction, double dt);

}  // namespace chemotaxis
