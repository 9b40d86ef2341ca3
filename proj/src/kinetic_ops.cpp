#include "chemotaxis/kinetic_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chemotaxis {

namespace {
constexpr double kModelTol = 1e-10;
}

DenseLU lu_factor(std::vector<double> a, int n) {
    DenseLU lu;
    lu.n = n;
    lu.piv.resize(n);
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(a[k * n + k]);
        for (int i = k + 1; i < n; ++i) {
            double cand = std::abs(a[i * n + k]);
            if (cand > best) {
                best = cand;
                p = i;
            }
        }
        if (best == 0.0) throw std::runtime_error("singular matrix in lu_factor");
        lu.piv[k] = p;
        if (p != k)
            for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
        const double pivot = a[k * n + k];
        for (int i = k + 1; i < n; ++i) {
            const double m = a[i * n + k] / pivot;
            a[i * n + k] = m;
            for (int j = k + 1; j < n; ++j) a[i * n + j] -= m * a[k * n + j];
        }
    }
    lu.a = std::move(a);
    return lu;
}

std::vector<double> lu_solve(const DenseLU& lu, std::vector<double> b) {
    const int n = lu.n;
    // interchanges first, then the triangular solves against the final factors
    for (int k = 0; k < n; ++k)
        if (lu.piv[k] != k) std::swap(b[k], b[lu.piv[k]]);
    for (int k = 0; k < n; ++k)
        for (int i = k + 1; i < n; ++i) b[i] -= lu.a[i * n + k] * b[k];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) b[i] -= lu.a[i * n + j] * b[j];
        b[i] /= lu.a[i * n + i];
    }
    return b;
}

TurningModel make_turning_model(VelocityProfile M, double sigma, Kernel0 T0, Kernel1 T1,
                                const VelocityGrid& grid, bool relaxation,
                                bool t1_first_arg_only) {
    if (sigma <= 0.0) throw std::invalid_argument("turning model: sigma must be positive");
    if (static_cast<int>(M.size()) != grid.Nv + 1)
        throw std::invalid_argument("turning model: M has wrong length");

    const double norm = bracket(M, grid);
    if (std::abs(norm - 1.0) > kModelTol)
        throw std::invalid_argument("turning model: bracket(M) = " + std::to_string(norm) +
                                    ", expected 1");
    VelocityProfile vM(M.size());
    for (int j = 0; j <= grid.Nv; ++j) vM[j] = grid.nodes[j] * M[j];
    const double flux = bracket(vM, grid);
    if (std::abs(flux) > kModelTol)
        throw std::invalid_argument("turning model: bracket(v*M) = " + std::to_string(flux) +
                                    ", expected 0");

    for (int j = 0; j <= grid.Nv; ++j) {
        for (int l = 0; l <= grid.Nv; ++l) {
            const double vj = grid.nodes[j], vl = grid.nodes[l];
            const double t_jl = T0(vj, vl);
            if (t_jl < sigma * M[j] - kModelTol)
                throw std::invalid_argument("turning model: T0 below sigma*M at nodes");
            const double balance = T0(vl, vj) * M[j] - t_jl * M[l];
            if (std::abs(balance) > kModelTol)
                throw std::invalid_argument("turning model: detailed balance violated");
            if (relaxation && std::abs(t_jl - sigma * M[j]) > kModelTol)
                throw std::invalid_argument("turning model: relaxation flag but T0 != sigma*M");
        }
    }
    if (t1_first_arg_only) {
        for (double dS : {-1.0, 0.5}) {
            for (int j = 0; j <= grid.Nv; j += std::max(1, grid.Nv / 4)) {
                const double vj = grid.nodes[j];
                if (std::abs(T1(dS, vj, grid.nodes[0]) - T1(dS, vj, grid.nodes[grid.Nv])) >
                    kModelTol)
                    throw std::invalid_argument(
                        "turning model: t1_first_arg_only flag but T1 depends on v'");
            }
        }
    }

    TurningModel model;
    model.M = std::move(M);
    model.M_mid.resize(grid.Nv);
    for (int l = 0; l < grid.Nv; ++l) model.M_mid[l] = 0.5 * (model.M[l] + model.M[l + 1]);
    model.sigma = sigma;
    model.kernel_T0 = std::move(T0);
    model.kernel_T1 = std::move(T1);
    model.relaxation = relaxation;
    model.t1_first_arg_only = t1_first_arg_only;
    return model;
}

TurningModel make_run_tumble_model(const VelocityGrid& grid, double sigma) {
    const double m = 1.0 / (grid.v_max - grid.v_min);
    VelocityProfile M(grid.Nv + 1, m);
    Kernel0 T0 = [sigma, m](double, double) { return sigma * m; };
    Kernel1 T1 = [](double dS, double v, double) { return std::max(v * dS, 0.0); };
    return make_turning_model(std::move(M), sigma, std::move(T0), std::move(T1), grid,
                              /*relaxation=*/true, /*t1_first_arg_only=*/true);
}

VelocityProfile apply_T0(const VelocityProfile& G, const TurningModel& model,
                         const VelocityGrid& grid) {
    const int Nv = grid.Nv;
    VelocityProfile out(Nv + 1);
    if (model.relaxation) {
        const double mean = bracket(G, grid);
        for (int j = 0; j <= Nv; ++j) out[j] = model.sigma * (model.M[j] * mean - G[j]);
        return out;
    }
    for (int j = 0; j <= Nv; ++j) {
        const double vj = grid.nodes[j];
        double gain = 0.0, loss = 0.0;
        for (int l = 0; l < Nv; ++l) {
            const double vl = grid.midpoints[l];
            gain += model.kernel_T0(vj, vl) * 0.5 * (G[l] + G[l + 1]);
            loss += model.kernel_T0(vl, vj);
        }
        out[j] = grid.dv * (gain - G[j] * loss);
    }
    return out;
}

VelocityProfile apply_T1(double dS, const VelocityProfile& G, const TurningModel& model,
                         const VelocityGrid& grid) {
    const int Nv = grid.Nv;
    VelocityProfile out(Nv + 1);
    if (model.t1_first_arg_only) {
        const double mean = bracket(G, grid);
        double loss = 0.0;
        for (int l = 0; l < Nv; ++l) loss += model.kernel_T1(dS, grid.midpoints[l], 0.0);
        loss *= grid.dv;
        for (int j = 0; j <= Nv; ++j)
            out[j] = model.kernel_T1(dS, grid.nodes[j], 0.0) * mean - G[j] * loss;
        return out;
    }
    for (int j = 0; j <= Nv; ++j) {
        const double vj = grid.nodes[j];
        double gain = 0.0, loss = 0.0;
        for (int l = 0; l < Nv; ++l) {
            const double vl = grid.midpoints[l];
            gain += model.kernel_T1(dS, vj, vl) * 0.5 * (G[l] + G[l + 1]);
            loss += model.kernel_T1(dS, vl, vj);
        }
        out[j] = grid.dv * (gain - G[j] * loss);
    }
    return out;
}

std::vector<double> t0_matrix(const TurningModel& model, const VelocityGrid& grid) {
    const int n = grid.Nv + 1;
    std::vector<double> A(n * n, 0.0);
    VelocityProfile e(n, 0.0);
    for (int m = 0; m < n; ++m) {
        e[m] = 1.0;
        auto col = apply_T0(e, model, grid);
        for (int j = 0; j < n; ++j) A[j * n + m] = col[j];
        e[m] = 0.0;
    }
    return A;
}

VelocityProfile solve_T0(const VelocityProfile& rhs, const TurningModel& model,
                         const VelocityGrid& grid) {
    double scale = 1.0;
    for (double x : rhs) scale = std::max(scale, std::abs(x));
    const double mean = bracket(rhs, grid);
    if (std::abs(mean) > 1e-10 * scale)
        throw std::invalid_argument("solve_T0: rhs has nonzero mean, no solution");

    const int n = grid.Nv + 1;
    if (model.relaxation) {
        VelocityProfile G(n);
        for (int j = 0; j < n; ++j) G[j] = -rhs[j] / model.sigma;
        return G;
    }

    // dense system with the mean-zero constraint appended via a multiplier
    const auto A = t0_matrix(model, grid);
    const auto w = bracket_weights(grid);
    const int m = n + 1;
    std::vector<double> B(m * m, 0.0), b(m, 0.0);
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) B[j * m + l] = A[j * n + l];
        B[j * m + n] = model.M[j];
        B[n * m + j] = w[j];
        b[j] = rhs[j];
    }
    auto sol = lu_solve(lu_factor(std::move(B), m), std::move(b));
    sol.resize(n);
    return sol;
}

double diffusion_coefficient(const TurningModel& model, const VelocityGrid& grid) {
    VelocityProfile v2M(grid.Nv + 1);
    for (int j = 0; j <= grid.Nv; ++j)
        v2M[j] = grid.nodes[j] * grid.nodes[j] * model.M[j];
    return bracket(v2M, grid) / model.sigma;
}

double drift_coefficient(double dS, const TurningModel& model, const VelocityGrid& grid) {
    auto t1M = apply_T1(dS, model.M, model, grid);
    for (int j = 0; j <= grid.Nv; ++j) t1M[j] *= grid.nodes[j];
    return bracket(t1M, grid) / model.sigma;
}

}  // namespace chemotaxis
