#include "pfrac/staggered.hpp"

#include <cmath>

namespace pfrac {

std::string to_string(AccelMode mode) {
    switch (mode) {
        case AccelMode::Plain: return "plain";
        case AccelMode::AndersonOnly: return "anderson";
        case AccelMode::RelaxOnly: return "relax";
        case AccelMode::Combined: return "combined";
    }
    return "?";
}

std::string to_string(IterMode mode) {
    switch (mode) {
        case IterMode::Plain: return "Plain";
        case IterMode::AA: return "AA";
        case IterMode::OR: return "OR";
    }
    return "?";
}

void SolverConfig::validate() const {
    if (tol_res_abs <= 0.0) throw std::invalid_argument("tol_res_abs must be positive");
    if (tol_res_rel <= 0.0) throw std::invalid_argument("tol_res_rel must be positive");
    if (tol_inc_abs <= 0.0) throw std::invalid_argument("tol_inc_abs must be positive");
    if (tol_inc_rel <= 0.0) throw std::invalid_argument("tol_inc_rel must be positive");
    if (tol_inner <= 0.0) throw std::invalid_argument("tol_inner must be positive");
    if (linear_rel_tol <= 0.0) throw std::invalid_argument("linear_rel_tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (depth_m < 0) throw std::invalid_argument("depth_m must be >= 0");
    if (omega <= 0.0 || omega >= 2.0) throw std::invalid_argument("omega must lie in (0, 2)");
    if (n_switch < 1) throw std::invalid_argument("n_switch must be >= 1");
    if (newton_cap < 1) throw std::invalid_argument("newton_cap must be >= 1");
}

int newton_solve_displacement(const Mesh& mesh, State& state, const MaterialParams& params,
                              const DofMap& dofmap, const SolverConfig& cfg,
                              double first_res_norm) {
    if (first_res_norm == 0.0) return 0;  // nothing to balance against
    Vector history;
    for (int j = 0;; ++j) {
        Vector residual = assemble_residual(mesh, state, params, dofmap);
        const double rnorm = norm2(residual);
        history.push_back(rnorm);
        if (rnorm / first_res_norm <= cfg.tol_inner) return j;
        if (j >= cfg.newton_cap)
            throw NewtonError("newton_solve_displacement: cap of " +
                                  std::to_string(cfg.newton_cap) + " iterations exceeded",
                              std::move(history));
        const DisplacementAssembly sys = assemble_displacement(mesh, state, params, dofmap);
        for (double& v : residual) v = -v;
        const Vector delta = solve_spd(sys.tangent, residual, cfg.linear_rel_tol);
        axpy(1.0, delta, state.u);
    }
}

StaggeredStepResult staggered_step(const Mesh& mesh, const State& state,
                                   const HistoryField& history_prev,
                                   const MaterialParams& params, const DofMap& dofmap,
                                   const SolverConfig& cfg, double first_res_norm) {
    StaggeredStepResult result;
    result.hat = state;
    result.newton_iters =
        newton_solve_displacement(mesh, result.hat, params, dofmap, cfg, first_res_norm);

    result.hat.history = compute_history(mesh, result.hat.u, params, history_prev);
    const AssembledSystem phase = assemble_phasefield(mesh, result.hat, params, dofmap);
    result.hat.phi = solve_spd(phase.matrix, phase.rhs, cfg.linear_rel_tol);

    result.du.resize(result.hat.u.size());
    for (std::size_t i = 0; i < result.du.size(); ++i) result.du[i] = result.hat.u[i] - state.u[i];
    result.dphi.resize(result.hat.phi.size());
    for (std::size_t i = 0; i < result.dphi.size(); ++i)
        result.dphi[i] = result.hat.phi[i] - state.phi[i];
    return result;
}

bool convergence_check(const ConvergenceInputs& in, const SolverConfig& cfg) {
    if (in.res_u_norm > cfg.tol_res_abs) return false;
    if (in.first_res_norm > 0.0 && in.res_u_norm / in.first_res_norm > cfg.tol_res_rel)
        return false;
    if (in.du_l2 + in.dphi_l2 > cfg.tol_inc_abs) return false;
    // Relative increments; a vanishing denominator (e.g. phi == 0 at the first
    // loading step of an intact body) drops that term.
    double rel = 0.0;
    if (in.u1_l2 > 1e-14) rel += in.du_l2 / in.u1_l2;
    if (in.phi0_l2 > 1e-14) rel += in.dphi_l2 / in.phi0_l2;
    return rel <= cfg.tol_inc_rel;
}

namespace {

Vector stack(const Vector& u, const Vector& phi) {
    Vector x;
    x.reserve(u.size() + phi.size());
    x.insert(x.end(), u.begin(), u.end());
    x.insert(x.end(), phi.begin(), phi.end());
    return x;
}

void unstack(const Vector& x, Vector& u, Vector& phi) {
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = x[i];
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = x[u.size() + i];
}

}  // namespace

LoadStepResult run_loading_step(const Mesh& mesh, State& state, const MaterialParams& params,
                                const DofMap& dofmap, const SolverConfig& cfg, int load_step,
                                const CsrMatrix& mass) {
    LoadStepResult out;

    const double phi0_l2 = l2_norm_scalar(mass, state.phi);
    apply_dirichlet(state.u, dofmap, load_step);
    const HistoryField history_prev = state.history;

    const double first_res_norm =
        norm2(assemble_residual(mesh, state, params, dofmap));

    AndersonState astate(cfg.depth_m);
    ControllerState cstate;
    cstate.n_switch = cfg.n_switch;
    double u1_l2 = 0.0;

    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        const Vector u_prev = state.u;
        const Vector phi_prev = state.phi;

        IterMode itmode = IterMode::Plain;
        bool use_relax = false, use_anderson = false;
        switch (cfg.mode) {
            case AccelMode::Plain: break;
            case AccelMode::AndersonOnly:
                use_anderson = true;
                itmode = IterMode::AA;
                break;
            case AccelMode::RelaxOnly:
                use_relax = true;
                itmode = IterMode::OR;
                break;
            case AccelMode::Combined: {
                const AccelDecision d = controller_decide(cstate);
                if (d == AccelDecision::UseRelaxation) {
                    use_relax = true;
                    itmode = IterMode::OR;
                } else {
                    if (d == AccelDecision::RestartAndersonThenUse) controller_restart(astate);
                    use_anderson = true;
                    itmode = IterMode::AA;
                }
                break;
            }
        }

        int newton_iters = 0;
        if (use_relax) {
            // Relaxation interleaves with the subproblems: the displacement
            // increment is relaxed before the phase solve sees it.
            newton_iters =
                newton_solve_displacement(mesh, state, params, dofmap, cfg, first_res_norm);
            state.u = relax_increment(u_prev, state.u, cfg.omega);
            state.history = compute_history(mesh, state.u, params, history_prev);
            const AssembledSystem phase = assemble_phasefield(mesh, state, params, dofmap);
            const Vector phi_hat = solve_spd(phase.matrix, phase.rhs, cfg.linear_rel_tol);
            state.phi = relax_increment(phi_prev, phi_hat, cfg.omega);
        } else {
            StaggeredStepResult step =
                staggered_step(mesh, state, history_prev, params, dofmap, cfg, first_res_norm);
            newton_iters = step.newton_iters;
            state.history = std::move(step.hat.history);
            if (use_anderson) {
                if (cfg.anderson_phi_only) {
                    state.u = std::move(step.hat.u);
                    state.phi = anderson_update(astate, step.hat.phi, step.dphi);
                } else {
                    const Vector x =
                        anderson_update(astate, stack(step.hat.u, step.hat.phi),
                                        stack(step.du, step.dphi));
                    unstack(x, state.u, state.phi);
                }
            } else {
                state.u = std::move(step.hat.u);
                state.phi = std::move(step.hat.phi);
            }
        }

        const double res_u_norm = norm2(assemble_residual(mesh, state, params, dofmap));

        Vector du(state.u.size()), dphi(state.phi.size());
        for (std::size_t i = 0; i < du.size(); ++i) du[i] = state.u[i] - u_prev[i];
        for (std::size_t i = 0; i < dphi.size(); ++i) dphi[i] = state.phi[i] - phi_prev[i];
        const double du_l2 = l2_norm_displacement(mass, du);
        const double dphi_l2 = l2_norm_scalar(mass, dphi);
        if (iter == 1) u1_l2 = l2_norm_displacement(mass, state.u);

        const double energy = total_energy(mesh, state, params, dofmap);
        out.records.push_back({load_step, iter, res_u_norm, itmode, newton_iters,
                               du_l2 + dphi_l2, energy});
        cstate.residual_history.push_back(res_u_norm);

        if (convergence_check({res_u_norm, first_res_norm, du_l2, dphi_l2, u1_l2, phi0_l2},
                              cfg)) {
            out.converged = true;
            break;
        }
    }

    // Accepted state: pin the history there (the last in-loop update was taken
    // at the pre-acceleration displacement).
    state.history = compute_history(mesh, state.u, params, history_prev);
    return out;
}

int SimulationReport::total_iterations() const {
    int total = 0;
    for (const auto& s : steps) total += s.iterations;
    return total;
}

bool SimulationReport::all_converged() const {
    for (const auto& s : steps)
        if (!s.converged) return false;
    return true;
}

SimulationReport run_simulation(const BenchmarkCase& bc, const SolverConfig& cfg) {
    cfg.validate();
    if (!bc.params.valid()) throw std::invalid_argument("run_simulation: invalid material parameters");

    SimulationReport report;
    report.case_name = bc.name;
    report.profile = bc.profile;
    report.mode = cfg.mode;
    report.ell_used = bc.params.ell;
    report.ell_adjusted = bc.ell_adjusted;

    const Mesh mesh = build_mesh(bc.recipe);
    const DofMap dofmap = build_dofmap(bc, mesh);
    const CsrMatrix mass = assemble_mass_matrix(mesh);
    State state = make_state(mesh);

    for (int n = 1; n <= bc.n_steps; ++n) {
        LoadStepResult step = run_loading_step(mesh, state, bc.params, dofmap, cfg, n, mass);
        const auto tau = compute_traction(mesh, state, bc.params, bc.traction_tag);

        StepSummary summary;
        summary.step = n;
        summary.iterations = static_cast<int>(step.records.size());
        summary.converged = step.converged;
        summary.applied_displacement = bc.load_size * n;
        summary.tau_x = tau[0];
        summary.tau_y = tau[1];
        for (const auto& rec : step.records) {
            if (rec.mode == IterMode::AA) ++summary.n_aa;
            else if (rec.mode == IterMode::OR) ++summary.n_or;
            else ++summary.n_plain;
        }
        report.steps.push_back(summary);
        report.records.insert(report.records.end(), step.records.begin(), step.records.end());
    }
    report.final_state = std::move(state);
    return report;
}

}  // namespace pfrac
