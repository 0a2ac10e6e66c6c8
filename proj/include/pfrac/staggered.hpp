// The staggered solver: inner Newton for the displacement subproblem, one
// staggered sweep (displacement solve then exact phase-field solve), the
// four-part stopping test, and the loading-step / simulation drivers with
// optional acceleration.
#pragma once

#include "pfrac/accel.hpp"
#include "pfrac/bench.hpp"
#include "pfrac/fem.hpp"

#include <string>
#include <vector>

namespace pfrac {

enum class AccelMode { Plain, AndersonOnly, RelaxOnly, Combined };

enum class IterMode { Plain, AA, OR };

std::string to_string(AccelMode mode);
std::string to_string(IterMode mode);

struct SolverConfig {
    double tol_res_abs = 1e-8;
    double tol_res_rel = 5e-3;
    double tol_inc_abs = 1e-8;
    double tol_inc_rel = 1e-2;
    double tol_inner = 1e-4;
    int max_iter = 1000;
    int depth_m = 1;
    double omega = 1.6;
    int n_switch = 5;
    AccelMode mode = AccelMode::Combined;
    bool anderson_phi_only = false;  // accelerate phi alone instead of (u, phi)
    double linear_rel_tol = 1e-12;   // subproblem CG tolerance
    int newton_cap = 50;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct IterationRecord {
    int load_step;
    int iter;
    double res_u_norm;
    IterMode mode;
    int newton_iters;
    double increment_norm;  // ||du||_L2 + ||dphi||_L2
    double energy;          // total energy at the iterate
};

struct NewtonError : std::runtime_error {
    NewtonError(const std::string& what, Vector history)
        : std::runtime_error(what), residual_history(std::move(history)) {}
    Vector residual_history;
};

// Newton iteration for the displacement equation at fixed phi (state.phi).
// Terminates when ||Res_u|| / first_res_norm <= tol_inner; the initial guess
// is state.u as passed in. Returns the number of Newton updates taken.
int newton_solve_displacement(const Mesh& mesh, State& state, const MaterialParams& params,
                              const DofMap& dofmap, const SolverConfig& cfg,
                              double first_res_norm);

struct StaggeredStepResult {
    State hat;        // S(x): displacement solve then phase solve
    Vector du;        // hat.u - u_prev
    Vector dphi;      // hat.phi - phi_prev
    int newton_iters;
};

// One application of the staggered operator S at the given state. The history
// entering the phase solve is max(history_prev, Psi_+(eps(u_hat))).
StaggeredStepResult staggered_step(const Mesh& mesh, const State& state,
                                   const HistoryField& history_prev,
                                   const MaterialParams& params, const DofMap& dofmap,
                                   const SolverConfig& cfg, double first_res_norm);

struct ConvergenceInputs {
    double res_u_norm;
    double first_res_norm;  // ||Res_u|| at the step's initial guess
    double du_l2;
    double dphi_l2;
    double u1_l2;    // ||u^{n,1}||_L2 denominator
    double phi0_l2;  // ||phi^{n,0}||_L2 denominator
};

// All four stopping criteria (absolute/relative residual, absolute/relative
// increment) must hold; comparisons are <=. Relative tests with vanishing
// denominators pass vacuously.
bool convergence_check(const ConvergenceInputs& in, const SolverConfig& cfg);

struct LoadStepResult {
    bool converged = false;
    std::vector<IterationRecord> records;
};

// Runs staggered iterations for one loading step until convergence or
// max_iter, applying the configured acceleration as post-processing. On entry
// state holds the converged state of the previous step; on exit it holds the
// accepted state with the history finalized there.
LoadStepResult run_loading_step(const Mesh& mesh, State& state, const MaterialParams& params,
                                const DofMap& dofmap, const SolverConfig& cfg, int load_step,
                                const CsrMatrix& mass);

struct StepSummary {
    int step = 0;
    int iterations = 0;
    bool converged = false;
    double applied_displacement = 0.0;
    double tau_x = 0.0;
    double tau_y = 0.0;
    int n_aa = 0;
    int n_or = 0;
    int n_plain = 0;
};

struct SimulationReport {
    std::string case_name;
    std::string profile;
    AccelMode mode = AccelMode::Plain;
    double ell_used = 0.0;
    bool ell_adjusted = false;
    std::vector<StepSummary> steps;
    std::vector<IterationRecord> records;
    State final_state;  // accepted state after the last loading step

    int total_iterations() const;
    bool all_converged() const;
};

// Full loading loop over a benchmark case; collects per-step iteration counts,
// load-curve samples, and the complete residual history.
SimulationReport run_simulation(const BenchmarkCase& bc, const SolverConfig& cfg);

}  // namespace pfrac
