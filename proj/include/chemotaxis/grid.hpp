#pragma once

#include <vector>

namespace chemotaxis {

// Profile over the velocity nodes v_0..v_Nv (length Nv+1).
using VelocityProfile = std::vector<double>;

// Staggered spatial grid on [x_min, x_max]: densities live at the Nx+1 nodes,
// the perturbation g lives at the faces x_{i+1/2}, including one ghost face
// beyond each wall.
struct SpatialGrid {
    double x_min = 0.0;
    double x_max = 0.0;
    int Nx = 0;
    double dx = 0.0;
    std::vector<double> nodes;  // x_i, i = 0..Nx
    std::vector<double> faces;  // x_{i+1/2}, i = -1..Nx (ghost faces at both ends)

    // Face center for i in [-1, Nx].
    double face(int i) const { return faces[static_cast<size_t>(i + 1)]; }
};

// Symmetric velocity grid on [-v_max, v_max] with Nv+1 nodes and the Nv cell
// midpoints used by the midpoint quadrature inside the turning operators.
struct VelocityGrid {
    double v_min = 0.0;
    double v_max = 0.0;
    int Nv = 0;
    double dv = 0.0;
    std::vector<double> nodes;      // v_j, j = 0..Nv
    std::vector<double> midpoints;  // (v_j + v_{j+1})/2, j = 0..Nv-1
};

// Throws std::invalid_argument on Nx < 2 or a degenerate interval.
SpatialGrid build_spatial_grid(double x_min, double x_max, int Nx);

// Throws std::invalid_argument on Nv < 2 or an asymmetric interval.
VelocityGrid build_velocity_grid(double v_min, double v_max, int Nv);

// Trapezoid quadrature of a node profile over the velocity interval.
double bracket(const VelocityProfile& G, const VelocityGrid& grid);

// Node weights of that quadrature: dv*[1/2, 1, ..., 1, 1/2].
std::vector<double> bracket_weights(const VelocityGrid& grid);

// G minus its equilibrium projection: G - M * bracket(G). Annihilates c*M and
// is idempotent whenever bracket(M) = 1.
VelocityProfile project_complement(const VelocityProfile& G,
                                   const VelocityProfile& M,
                                   const VelocityGrid& grid);

}  // namespace chemotaxis
