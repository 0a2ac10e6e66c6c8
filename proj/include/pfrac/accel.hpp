// Increment post-processing for the staggered scheme: Anderson acceleration,
// per-subproblem relaxation, and the residual-switched controller that
// alternates between them (with Anderson restart).
#pragma once

#include "pfrac/linalg.hpp"

#include <deque>

namespace pfrac {

// Ring buffers of the last m+1 staggered outputs S(x) and increments dS(x).
struct AndersonState {
    int depth_m = 1;
    std::deque<Vector> outputs;
    std::deque<Vector> increments;
    Vector last_alpha;  // affine weights of the most recent update (diagnostic)

    explicit AndersonState(int depth = 1) : depth_m(depth) {
        if (depth < 0) throw LinalgError("AndersonState: depth must be >= 0");
    }

    void clear() {
        outputs.clear();
        increments.clear();
        last_alpha.clear();
    }
};

// One Anderson step: pushes (S(x), dS(x)) into the buffers, solves the affine
// constrained least-squares problem min ||F alpha|| s.t. sum(alpha) = 1 in its
// unconstrained difference form, and returns the combined iterate
// sum_k alpha_k S(x^k). With an empty history this is the plain output.
Vector anderson_update(AndersonState& astate, const Vector& new_output,
                       const Vector& new_increment);

// x_prev + omega * (x_hat - x_prev); omega == 1 returns x_hat exactly.
Vector relax_increment(const Vector& x_prev, const Vector& x_hat, double omega);

enum class AccelDecision { UseAnderson, UseRelaxation, RestartAndersonThenUse };

struct ControllerState {
    bool relaxing = false;
    std::vector<double> residual_history;  // ||Res_u||_2 of completed iterations
    int n_switch = 5;
};

// Decides the post-processing of the upcoming iteration from the residual
// norms of the completed ones (one-step shift of the printed algorithm, which
// tests residuals that do not exist yet). Mutates cstate.relaxing on switches.
AccelDecision controller_decide(ControllerState& cstate);

// Empties the Anderson buffers so the next update acts like a first iteration.
void controller_restart(AndersonState& astate);

}  // namespace pfrac
