#pragma once

#include <functional>
#include <vector>

#include "chemotaxis/grid.hpp"

namespace chemotaxis {

// Dense LU with partial pivoting, for the small velocity-space systems.
struct DenseLU {
    int n = 0;
    std::vector<double> a;  // row-major factors
    std::vector<int> piv;
};

DenseLU lu_factor(std::vector<double> a, int n);  // throws std::runtime_error when singular
std::vector<double> lu_solve(const DenseLU& lu, std::vector<double> b);

using Kernel0 = std::function<double(double, double)>;          // T0(v, v')
using Kernel1 = std::function<double(double, double, double)>;  // T1(dS; v, v')

// Turning model: equilibrium M plus the two collision kernels. The flags mark
// structure the operators can exploit: `relaxation` means T0(v,v') = sigma*M(v)
// (closed-form inverse), `t1_first_arg_only` means T1 ignores the pre-turning
// velocity v' (one kernel evaluation per node instead of a double sum).
struct TurningModel {
    VelocityProfile M;      // equilibrium at the velocity nodes
    VelocityProfile M_mid;  // node averages at the midpoints
    double sigma = 1.0;
    Kernel0 kernel_T0;
    Kernel1 kernel_T1;
    bool relaxation = false;
    bool t1_first_arg_only = false;
};

// Validates at construction (tolerance 1e-10, hard std::invalid_argument):
// bracket(M) = 1, bracket(v*M) = 0, T0(v,v') >= sigma*M(v) and detailed
// balance T0(v',v)M(v) = T0(v,v')M(v') at all node pairs; when the flags are
// set, that the kernels actually have the claimed structure.
TurningModel make_turning_model(VelocityProfile M, double sigma, Kernel0 T0, Kernel1 T1,
                                const VelocityGrid& grid, bool relaxation = false,
                                bool t1_first_arg_only = false);

// Run-and-tumble model: uniform M = 1/(v_max - v_min), T0 = sigma*M,
// T1(dS; v, v') = max(v*dS, 0).
TurningModel make_run_tumble_model(const VelocityGrid& grid, double sigma);

// Discrete turning operator: midpoint quadrature of the kernel against the
// node-averaged profile, minus the loss term.
VelocityProfile apply_T0(const VelocityProfile& G, const TurningModel& model,
                         const VelocityGrid& grid);

// Same structure for the gradient-driven perturbation operator; dS is the
// one-sided difference of S at the face, supplied by the caller.
VelocityProfile apply_T1(double dS, const VelocityProfile& G, const TurningModel& model,
                         const VelocityGrid& grid);

// apply_T0 as a dense (Nv+1)^2 row-major matrix.
std::vector<double> t0_matrix(const TurningModel& model, const VelocityGrid& grid);

// Solves apply_T0(G) = rhs for mean-zero rhs, returning the mean-zero G.
// Relaxation models use G = -rhs/sigma; general kernels solve the dense
// system with the mean constraint appended. Throws std::invalid_argument
// when bracket(rhs) is not zero (no solution exists).
VelocityProfile solve_T0(const VelocityProfile& rhs, const TurningModel& model,
                         const VelocityGrid& grid);

// (1/sigma) * bracket(v^2 M).
double diffusion_coefficient(const TurningModel& model, const VelocityGrid& grid);

// (1/sigma) * bracket(v * apply_T1(dS, M)).
double drift_coefficient(double dS, const TurningModel& model, const VelocityGrid& grid);

}  // namespace chemotaxis
