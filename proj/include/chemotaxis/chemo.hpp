#pragma once

#include <vector>

#include "chemotaxis/grid.hpp"

namespace chemotaxis {

// Reaction-diffusion parameters of the chemoattractant equation
// dS/dt - D_S * d2S/dx2 = a*n - b*S.
struct ReactionParams {
    double a = 1.0;
    double b = 1.0;
    double D_S = 1.0;
};

struct TridiagonalSystem {
    std::vector<double> sub;    // length Nx
    std::vector<double> diag;   // length Nx+1
    std::vector<double> super;  // length Nx
    std::vector<double> rhs;    // length Nx+1
};

// Backward-Euler system for the chemoattractant on the nodes, homogeneous
// Neumann walls folded into the end rows. The per-node overload lets the
// diffusivity vary with position; the scalar version uses params.D_S.
TridiagonalSystem assemble_chemo_system(const std::vector<double>& S,
                                        const std::vector<double>& n_new,
                                        const ReactionParams& params, const SpatialGrid& grid,
                                        double dt);
TridiagonalSystem assemble_chemo_system(const std::vector<double>& S,
                                        const std::vector<double>& n_new,
                                        const ReactionParams& params,
                                        const std::vector<double>& D_nodes,
                                        const SpatialGrid& grid, double dt);

// Thomas elimination; throws std::runtime_error on a vanishing pivot (cannot
// happen for the assembled systems, which are strictly diagonally dominant).
std::vector<double> thomas_solve(TridiagonalSystem sys);

// One backward-Euler step of the chemoattractant given the fresh density.
std::vector<double> chemo_step(const std::vector<double>& S, const std::vector<double>& n_new,
                               const ReactionParams& params, const SpatialGrid& grid, double dt);

}  // namespace chemotaxis
