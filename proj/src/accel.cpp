#include "pfrac/accel.hpp"

#include <cstddef>

namespace pfrac {

Vector anderson_update(AndersonState& astate, const Vector& new_output,
                       const Vector& new_increment) {
    astate.outputs.push_back(new_output);
    astate.increments.push_back(new_increment);
    while (static_cast<int>(astate.outputs.size()) > astate.depth_m + 1) {
        astate.outputs.pop_front();
        astate.increments.pop_front();
    }

    const std::size_t cols = astate.increments.size();  // m_i + 1
    if (cols == 1) {
        astate.last_alpha = {1.0};
        return new_output;
    }

    // Unconstrained difference form: minimize over gamma the norm of
    // f_latest - [f_1 - f_0, ..., f_k - f_{k-1}] gamma, then map gamma back to
    // the affine weights alpha.
    const std::size_t n = new_increment.size();
    const std::size_t k = cols - 1;
    DenseMatrix diff(n, k);
    for (std::size_t j = 0; j < k; ++j) {
        const Vector& fj = astate.increments[j];
        const Vector& fj1 = astate.increments[j + 1];
        for (std::size_t i = 0; i < n; ++i) diff(i, j) = fj1[i] - fj[i];
    }
    const LstsqResult ls = solve_dense_lstsq(diff, new_increment);
    const Vector& gamma = ls.x;

    Vector alpha(cols, 0.0);
    alpha[0] = gamma[0];
    for (std::size_t j = 1; j < k; ++j) alpha[j] = gamma[j] - gamma[j - 1];
    alpha[k] = 1.0 - gamma[k - 1];
    astate.last_alpha = alpha;

    Vector x(n, 0.0);
    for (std::size_t j = 0; j < cols; ++j)
        if (alpha[j] != 0.0) axpy(alpha[j], astate.outputs[j], x);
    return x;
}

Vector relax_increment(const Vector& x_prev, const Vector& x_hat, double omega) {
    if (omega == 1.0) return x_hat;
    Vector x(x_prev.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = x_prev[i] + omega * (x_hat[i] - x_prev[i]);
    return x;
}

AccelDecision controller_decide(ControllerState& cstate) {
    const auto& res = cstate.residual_history;
    const std::size_t n = res.size();

    if (!cstate.relaxing) {
        // Anderson at the first iterations and while the residuals keep
        // decreasing; otherwise fall back to relaxation.
        if (n < 2 || res[n - 1] <= res[n - 2]) return AccelDecision::UseAnderson;
        cstate.relaxing = true;
        return AccelDecision::UseRelaxation;
    }

    // Relaxing: return to (restarted) Anderson once the last n_switch+1
    // residual norms are decreasing.
    const std::size_t needed = static_cast<std::size_t>(cstate.n_switch) + 1;
    if (n < needed) return AccelDecision::UseRelaxation;
    for (std::size_t i = n - needed + 1; i < n; ++i)
        if (res[i] > res[i - 1]) return AccelDecision::UseRelaxation;
    cstate.relaxing = false;
    return AccelDecision::RestartAndersonThenUse;
}

void controller_restart(AndersonState& astate) { astate.clear(); }

}  // namespace pfrac
