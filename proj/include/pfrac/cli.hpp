// Run configuration (key=value files plus flag overrides), sweep expansion,
// and CSV serialization of simulation reports.
#pragma once

#include "pfrac/staggered.hpp"

#include <string>
#include <vector>

namespace pfrac {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    std::string case_name = "tensile";
    std::string profile = "desk";
    std::string mode = "combined";  // plain | anderson | relax | combined
    int depth_m = 1;
    double omega = 1.6;
    int n_switch = 5;
    int max_iter = 1000;
    double tol_res_abs = 1e-8;
    double tol_res_rel = 5e-3;
    double tol_inc_abs = 1e-8;
    double tol_inc_rel = 1e-2;
    double tol_inner = 1e-4;
    std::string out_dir = "out";
    bool vtk = false;
    std::vector<int> sweep_depth;      // empty -> no sweep
    std::vector<double> sweep_omega;

    // Validated SolverConfig; throws ParseError naming the offending key.
    SolverConfig solver_config() const;
    AccelMode accel_mode() const;
};

// Parses a flat key=value file (# comments, blank lines allowed). Unknown keys
// are rejected. Values are validated on conversion but cross-field validation
// happens in solver_config().
RunConfig parse_config_file(const std::string& path);

// Applies "key=value" assignments (same keys as the config file) on top of an
// existing config; used for command-line overrides.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// Cartesian product of sweep_depth x sweep_omega; a config without sweep lists
// expands to itself.
std::vector<RunConfig> expand_sweep(const RunConfig& cfg);

// iterations.csv: load_step,iterations,converged,mode_summary plus a TOTAL row.
void write_iteration_csv(const SimulationReport& report, const std::string& path);

// load.csv: load_step,applied_displacement,tau_x,tau_y.
void write_load_csv(const SimulationReport& report, const std::string& path);

// residuals.csv: load_step,iter,res_u_norm,mode (long format, one row per
// staggered iteration).
void write_residual_csv(const SimulationReport& report, const std::string& path);

// sweep_summary.csv: depth,omega,total_iterations,all_converged.
struct SweepEntry {
    int depth;
    double omega;
    int total_iterations;
    bool all_converged;
};
void write_sweep_summary_csv(const std::vector<SweepEntry>& entries, const std::string& path);

// Minimal CSV reader (no quoting; the writers above never quote).
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace pfrac
