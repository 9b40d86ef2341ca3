#pragma once

#include <utility>
#include <vector>

#include "chemotaxis/chemo.hpp"
#include "chemotaxis/grid.hpp"
#include "chemotaxis/kinetic_ops.hpp"

namespace chemotaxis {

// State of the micro-macro solver. The density n and chemoattractant S live
// at the spatial nodes; the perturbation g lives at the faces, padded with
// one ghost face beyond each wall, velocity profile per face.
struct MMState {
    int Nx = 0;
    int Nv = 0;
    double eps = 1.0;
    double t = 0.0;
    std::vector<double> n;       // nodes 0..Nx
    std::vector<double> S;       // nodes 0..Nx
    std::vector<double> g;       // (Nx+2) faces x (Nv+1) velocities, face-major
    VelocityProfile f_left;      // inflow data at the walls (zero by default)
    VelocityProfile f_right;

    // Velocity profile at face i+1/2, i in [-1, Nx].
    double* g_face(int i) { return g.data() + static_cast<size_t>(i + 1) * (Nv + 1); }
    const double* g_face(int i) const {
        return g.data() + static_cast<size_t>(i + 1) * (Nv + 1);
    }
};

// Per-step diagnostics; boundary_flux is the exact discrete mass change the
// step admits through the walls, so mass_after - mass_before tracks it to
// round-off.
struct StepReport {
    double mass_before = 0.0;
    double mass_after = 0.0;
    double max_abs_g = 0.0;
    double boundary_flux = 0.0;
};

enum class MacroMode { Explicit, Implicit };

// LU cache for the implicit micro solve with non-relaxation kernels; the
// operator depends only on dt, so it is factored once and reused across
// faces and steps.
struct MicroSolver {
    double dt = -1.0;
    DenseLU lu;
};

// Gaussian density peak normalized to the requested total mass, the
// anisotropic seed perturbation g_0 = (f_0 - M n_0)/eps on the interior
// faces, ghost faces closed with the initial density, S = 0.
MMState initialize(const SpatialGrid& grid, const VelocityGrid& vgrid,
                   const TurningModel& model, double total_mass, double eps);

// dx*(half-weighted node sum) of the density.
double total_mass(const MMState& state, const SpatialGrid& grid);

// Advances g on the interior faces: implicit stiff relaxation, explicit
// projected transport, explicit stiff source. Ghost faces keep their
// previous values (they are refreshed after the macro update).
void micro_step(MMState& state, const SpatialGrid& grid, const VelocityGrid& vgrid,
                const TurningModel& model, double dt, MicroSolver* cache = nullptr);

// Interior density update from the fresh g fluxes.
void macro_step_explicit(MMState& state, const SpatialGrid& grid, const VelocityGrid& vgrid,
                         double dt);

// Implicit variant: the stiff part of the flux is folded into a tridiagonal
// diffusion solve; boundary contains the already-updated wall densities used
// as Dirichlet data.
void macro_step_implicit(MMState& state, std::pair<double, double> boundary,
                         const SpatialGrid& grid, const VelocityGrid& vgrid,
                         const TurningModel& model, double dt);

// Wall densities from the inflow closure; uses the pre-step n and the fresh
// g at the first/last interior faces. Does not modify the state.
std::pair<double, double> apply_boundary_density(const MMState& state, const SpatialGrid& grid,
                                                 const VelocityGrid& vgrid,
                                                 const TurningModel& model, double dt);

// Ghost faces from the inflow condition (outgoing velocities copy the
// interior neighbor, v = 0 included).
void apply_ghost_faces(MMState& state, const VelocityGrid& vgrid, const TurningModel& model);

// Full time step: micro, boundary densities, macro (chosen variant), ghost
// refresh, chemoattractant update. Advances state.t by dt.
StepReport step(MMState& state, const SpatialGrid& grid, const VelocityGrid& vgrid,
                const TurningModel& model, const ReactionParams& reaction, double dt,
                MacroMode mode, MicroSolver* cache = nullptr);

}  // namespace chemotaxis
