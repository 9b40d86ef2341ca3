#pragma once

#include <string>
#include <vector>

#include "chemotaxis/mm_scheme.hpp"
#include "chemotaxis/reference_schemes.hpp"

namespace chemotaxis {

enum class Scheme { MMExplicit, MMImplicit, ExplicitKinetic, KellerSegel, OddEven };

// dt tables: diffusive_sq = dx^2/2, kinetic = eps*dx/2, macroscopic = dx/2,
// odd_even_macroscopic = dx/40, fixed = dt_fixed.
enum class DtPolicy { DiffusiveSq, Kinetic, Macroscopic, OddEvenMacroscopic, Fixed };

struct RunConfig {
    Scheme scheme = Scheme::MMImplicit;
    double eps = 1.0;
    int Nx = 200;
    int Nv = 64;
    double x_min = -1.0, x_max = 1.0;
    double v_min = -1.0, v_max = 1.0;
    double t_end = 0.5;
    DtPolicy dt_policy = DtPolicy::Macroscopic;
    double dt_fixed = 0.0;
    double total_mass = 6.283185307179586;
    ReactionParams reaction;
    double sigma = 1.0;
    bool project = false;                // replace the seeded f_0 by M(v) n_0
    std::vector<double> snapshot_times;  // empty -> just t_end
    std::string output;                  // CSV path prefix; empty -> no files
};

const char* scheme_name(Scheme scheme);
const char* dt_policy_name(DtPolicy policy);

double grid_dx(const RunConfig& cfg);
double dt_from_policy(const RunConfig& cfg);

// Throws std::invalid_argument naming the offending field. The odd-even
// solver is tied to the uniform equilibrium on [-1, 1], so it insists on
// sigma = 1, even Nv and those velocity bounds.
void validate_config(const RunConfig& cfg);

// Strict parse: unknown keys and wrong types are config errors.
RunConfig config_from_json(const std::string& text);

// Stable micro-macro operating point for the configured eps: when
// eps - 2 eps^2 <= sigma dx / 4 (the linear stability bound with a factor-2
// margin for the drift coupling) the macroscopic step dx/2 keeps the
// explicit micro transport contractive and the implicit macro pays for the
// diffusion; otherwise run the explicit macro at the kinetic step eps dx / 2.
void apply_auto_mm(RunConfig& cfg);

// Relative trapezoid-weighted L2 distance between node profiles; the
// denominator comes from b.
double relative_l2(const std::vector<double>& a, const std::vector<double>& b);

struct Snapshot {
    double t = 0.0;
    std::vector<double> n, S;
    std::vector<double> f;  // node-major distribution; empty for Keller-Segel
};

// Uniform stepping facade over the five solvers.
class Simulator {
  public:
    explicit Simulator(RunConfig cfg);  // validates and builds the initial state

    const RunConfig& config() const { return cfg_; }
    const SpatialGrid& grid() const { return grid_; }
    const VelocityGrid& velocity_grid() const { return vgrid_; }
    double time() const { return t_; }
    double policy_dt() const { return dt_; }
    bool healthy() const { return healthy_; }

    bool advance(double dt);         // one step; false once the state blows up
    bool advance_to(double target);  // shortens the final step to land exactly

    const std::vector<double>& density() const { return n_; }
    const std::vector<double>& chemoattractant() const { return S_; }
    std::vector<double> distribution() const;  // empty for Keller-Segel
    double mass() const;
    double flux_accumulated() const { return flux_accum_; }
    Snapshot last_finite() const;  // state before the step that blew up

  private:
    void refresh_fields();

    RunConfig cfg_;
    SpatialGrid grid_;
    VelocityGrid vgrid_;
    TurningModel model_;
    MacroMode macro_mode_ = MacroMode::Implicit;
    MicroSolver cache_;
    MMState mm_;
    KineticState kin_;
    ParityState par_;
    std::vector<double> n_, S_;        // canonical views, refreshed per step
    std::vector<double> prev_n_, prev_S_;
    double prev_t_ = 0.0;
    double t_ = 0.0;
    double dt_ = 0.0;
    double D_ = 0.0, chi_ = 0.0;  // Keller-Segel coefficients
    double flux_accum_ = 0.0;
    bool healthy_ = true;
};

struct RunResult {
    std::vector<Snapshot> snapshots;
    bool blew_up = false;
    std::string diagnostic;
    double mass_initial = 0.0;
    double mass_final = 0.0;
    double flux_accumulated = 0.0;  // micro-macro runs carry the exact audit
};

// Deterministic trajectory; snapshots at the requested times (sorted,
// deduplicated), CSV per snapshot at <output>_t<k>.csv when output is set.
// A blow-up aborts the run, appends the last finite fields and reports it.
RunResult run(const RunConfig& cfg);

struct ConvergenceRow {
    int Nx = 0;
    double error_n = 0.0;
    double order_n = 0.0;  // NaN on the first row
    double error_f = 0.0;  // NaN when the scheme has no distribution
    double order_f = 0.0;
};

struct ConvergenceReport {
    double eps = 0.0;
    std::vector<ConvergenceRow> rows;
};

// Grid-doubling self-convergence at fixed t: each run is restricted to the
// next-coarser node set (grids nest, no interpolation) and compared in the
// dx-weighted norm against the coarse run, normalized by the coarse initial
// density norm. Non-nesting Nx lists are rejected.
std::vector<ConvergenceReport> convergence_study(const RunConfig& base,
                                                 const std::vector<double>& eps_list,
                                                 const std::vector<int>& nx_list, double t);

struct SweepResult {
    std::vector<double> eps_list;
    std::vector<double> x;
    std::vector<std::vector<double>> n;  // one profile per eps
    std::vector<double> n_ks;
    std::vector<double> dist_ks;  // relative L2 of each profile vs n_ks
};

// Micro-macro runs across eps at the auto operating point plus one
// Keller-Segel run, all at base.t_end.
SweepResult regime_sweep(const RunConfig& base, const std::vector<double>& eps_list);

struct ComparisonResult {
    std::vector<std::string> labels;
    std::vector<double> x;
    std::vector<std::vector<double>> n;
    std::vector<std::vector<double>> dist;  // dist[i][j] = relative_l2(n[i], n[j])
};

// Kinetic regime (eps >= 0.5): micro-macro at the kinetic step against the
// explicit kinetic and odd-even solvers, the latter two started from the
// projected equilibrium data. Diffusive regime: auto micro-macro against
// odd-even and Keller-Segel.
ComparisonResult scheme_comparison(const RunConfig& base);

struct EvolutionResult {
    std::vector<double> times;
    std::vector<double> x;
    std::vector<std::vector<double>> n;
    std::vector<double> diffs;  // ||n(t_{m+1}) - n(t_m)||_2, dx-weighted
    double mass_initial = 0.0;
    double mass_final = 0.0;
    double flux_accumulated = 0.0;
    bool blew_up = false;
};

// Long micro-macro run at the auto operating point with a stationarity
// diagnostic over the snapshot list.
EvolutionResult evolution_study(const RunConfig& base, const std::vector<double>& times);

std::string report_text(const RunResult& r);
std::string report_text(const std::vector<ConvergenceReport>& reports);
std::string report_text(const SweepResult& r);
std::string report_text(const ComparisonResult& r);
std::string report_text(const EvolutionResult& r);

}  // namespace chemotaxis
