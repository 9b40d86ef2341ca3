#include "chemotaxis/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace chemotaxis {

SpatialGrid build_spatial_grid(double x_min, double x_max, int Nx) {
    if (Nx < 2) throw std::invalid_argument("spatial grid needs Nx >= 2");
    if (!(x_max > x_min)) throw std::invalid_argument("spatial grid needs x_max > x_min");

    SpatialGrid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.Nx = Nx;
    g.dx = (x_max - x_min) / Nx;
    g.nodes.resize(Nx + 1);
    for (int i = 0; i <= Nx; ++i) g.nodes[i] = x_min + i * g.dx;
    g.faces.resize(Nx + 2);
    for (int i = -1; i <= Nx; ++i) g.faces[i + 1] = x_min + (i + 0.5) * g.dx;
    return g;
}

VelocityGrid build_velocity_grid(double v_min, double v_max, int Nv) {
    if (Nv < 2) throw std::invalid_argument("velocity grid needs Nv >= 2");
    if (!(v_max > 0.0) || v_min != -v_max)
        throw std::invalid_argument("velocity grid must be symmetric: v_min = -v_max < 0");

    VelocityGrid g;
    g.v_min = v_min;
    g.v_max = v_max;
    g.Nv = Nv;
    g.dv = (v_max - v_min) / Nv;
    g.nodes.resize(Nv + 1);
    for (int j = 0; j <= Nv; ++j) g.nodes[j] = v_min + j * g.dv;
    g.midpoints.resize(Nv);
    for (int l = 0; l < Nv; ++l) g.midpoints[l] = 0.5 * (g.nodes[l] + g.nodes[l + 1]);
    return g;
}

double bracket(const VelocityProfile& G, const VelocityGrid& grid) {
    const int Nv = grid.Nv;
    double sum = 0.5 * (G[0] + G[Nv]);
    for (int j = 1; j < Nv; ++j) sum += G[j];
    return sum * grid.dv;
}

std::vector<double> bracket_weights(const VelocityGrid& grid) {
    std::vector<double> w(grid.Nv + 1, grid.dv);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

VelocityProfile project_complement(const VelocityProfile& G,
                                   const VelocityProfile& M,
                                   const VelocityGrid& grid) {
    const double mean = bracket(G, grid);
    VelocityProfile out(G.size());
    for (size_t j = 0; j < G.size(); ++j) out[j] = G[j] - M[j] * mean;
    return out;
}

}  // namespace chemotaxis
