#ifndef CHEMOTAXIS_H
#define CHEMOTAXIS_H

/* C interface to the chemotaxis solvers. Configuration travels as a JSON
 * object; state lives behind opaque handles. All functions are safe to call
 * with NULL handles (they report a config error). Error messages for failed
 * calls are kept per thread and read back with ctx_last_error(). */

#ifdef __cplusplus
extern "C" {
#endif

#define CTX_OK 0
#define CTX_ERR_CONFIG 1
#define CTX_ERR_BLOWUP 2

typedef struct ctx_solver ctx_solver;
typedef struct ctx_report ctx_report;

const char* ctx_version(void);

/* Message from the most recent failed call on this thread ("" if none). */
const char* ctx_last_error(void);

/* Builds a solver from a JSON run configuration. Recognized keys: scheme,
 * eps, Nx, Nv, x_min, x_max, v_min, v_max, t_end, dt_policy, dt, total_mass,
 * D_S, a, b, sigma, project, snapshot_times, output. Returns NULL on a
 * config error. */
ctx_solver* ctx_solver_create(const char* config_json);
void ctx_solver_destroy(ctx_solver* solver);

/* Advances to the requested time with the configured step policy, shortening
 * the final step to land exactly. Returns CTX_OK, or CTX_ERR_BLOWUP once the
 * state loses finiteness (the solver then stays unhealthy). */
int ctx_solver_advance(ctx_solver* solver, double t_target);

double ctx_solver_time(const ctx_solver* solver);

/* Number of spatial nodes (Nx + 1); 0 for a NULL handle. */
int ctx_solver_grid_size(const ctx_solver* solver);

/* Copy the current fields into out[0..len-1]; len must equal the grid size. */
int ctx_solver_density(const ctx_solver* solver, double* out, int len);
int ctx_solver_chemoattractant(const ctx_solver* solver, double* out, int len);

/* Runs one experiment: kind is "run", "converge", "sweep", "compare" or
 * "evolve". The config JSON additionally accepts "eps_list" (converge,
 * sweep) and "nx_list" (converge); "evolve" reads its snapshot times from
 * snapshot_times. Defaults when absent: converge eps_list {1, 0.01, 1e-4,
 * 1e-6} on grids {80, 160, 320, 640}; sweep eps_list {1, 2^-3, 2^-5, 2^-7,
 * 2^-9}; evolve snapshots {0.5, 1, ..., 3}. A non-empty output_base
 * overrides the config's output prefix for the CSV files. Always returns a
 * report; inspect its status and text. */
ctx_report* ctx_experiment(const char* kind, const char* config_json, const char* output_base);

int ctx_report_status(const ctx_report* report);
const char* ctx_report_text(const ctx_report* report);
void ctx_report_destroy(ctx_report* report);

#ifdef __cplusplus
}
#endif

#endif /* CHEMOTAXIS_H */
