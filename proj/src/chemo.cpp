#include "chemotaxis/chemo.hpp"

#include <cmath>
#include <stdexcept>

namespace chemotaxis {

TridiagonalSystem assemble_chemo_system(const std::vector<double>& S,
                                        const std::vector<double>& n_new,
                                        const ReactionParams& params,
                                        const std::vector<double>& D_nodes,
                                        const SpatialGrid& grid, double dt) {
    const int Nx = grid.Nx;
    TridiagonalSystem sys;
    sys.sub.assign(Nx, 0.0);
    sys.diag.assign(Nx + 1, 0.0);
    sys.super.assign(Nx, 0.0);
    sys.rhs.assign(Nx + 1, 0.0);

    for (int i = 0; i <= Nx; ++i) {
        const double c = dt * D_nodes[i] / (grid.dx * grid.dx);
        sys.diag[i] = 1.0 + 2.0 * c + params.b * dt;
        // Neumann walls: the ghost neighbor folds onto the interior one
        if (i == 0)
            sys.super[0] = -2.0 * c;
        else if (i == Nx)
            sys.sub[Nx - 1] = -2.0 * c;
        else {
            sys.sub[i - 1] = -c;
            sys.super[i] = -c;
        }
        sys.rhs[i] = S[i] + params.a * dt * n_new[i];
    }
    return sys;
}

TridiagonalSystem assemble_chemo_system(const std::vector<double>& S,
                                        const std::vector<double>& n_new,
                                        const ReactionParams& params, const SpatialGrid& grid,
                                        double dt) {
    std::vector<double> D(grid.Nx + 1, params.D_S);
    return assemble_chemo_system(S, n_new, params, D, grid, dt);
}

std::vector<double> thomas_solve(TridiagonalSystem sys) {
    const size_t n = sys.diag.size();
    for (size_t i = 1; i < n; ++i) {
        if (sys.diag[i - 1] == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
        const double m = sys.sub[i - 1] / sys.diag[i - 1];
        sys.diag[i] -= m * sys.super[i - 1];
        sys.rhs[i] -= m * sys.rhs[i - 1];
    }
    if (sys.diag[n - 1] == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
    std::vector<double> x(n);
    x[n - 1] = sys.rhs[n - 1] / sys.diag[n - 1];
    for (size_t i = n - 1; i-- > 0;)
        x[i] = (sys.rhs[i] - sys.super[i] * x[i + 1]) / sys.diag[i];
    return x;
}

std::vector<double> chemo_step(const std::vector<double>& S, const std::vector<double>& n_new,
                               const ReactionParams& params, const SpatialGrid& grid,
                               double dt) {
    return thomas_solve(assemble_chemo_system(S, n_new, params, grid, dt));
}

}  // namespace chemotaxis
