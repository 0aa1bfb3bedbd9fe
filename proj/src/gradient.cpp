#include "ivo/gradient.hpp"

#include <map>
#include <stdexcept>

#include "ivo/risk.hpp"

namespace ivo {

namespace {

/// Center the per-(episode, step) weights by an action-independent baseline.
void subtract_baseline(std::vector<std::vector<double>>& weights,
                       const std::vector<Trajectory>& sample, bool tabular_states) {
    std::map<std::pair<int, int>, std::pair<double, long>> stats;  // (step, state-key) -> (sum, n)
    for (std::size_t e = 0; e < sample.size(); ++e)
        for (std::size_t i = 0; i < weights[e].size(); ++i) {
            const int key = tabular_states ? state_index(sample[e].states[i]) : 0;
            auto& [sum, n] = stats[{static_cast<int>(i), key}];
            sum += weights[e][i];
            n += 1;
        }
    for (std::size_t e = 0; e < sample.size(); ++e)
        for (std::size_t i = 0; i < weights[e].size(); ++i) {
            const int key = tabular_states ? state_index(sample[e].states[i]) : 0;
            const auto& [sum, n] = stats[{static_cast<int>(i), key}];
            weights[e][i] -= sum / static_cast<double>(n);
        }
}

std::vector<double> score_estimator(const std::vector<Trajectory>& sample,
                                    std::vector<std::vector<double>> weights,
                                    const DifferentiablePolicy& policy, const DiscountSpec& disc,
                                    const GradientOptions& opts) {
    if (sample.empty()) throw std::invalid_argument("gradient: empty sample");
    if (opts.baseline)
        subtract_baseline(weights, sample,
                          dynamic_cast<const TabularSoftmaxPolicy*>(&policy) != nullptr);

    std::vector<double> grad(policy.n_params(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(sample.size());
    for (std::size_t e = 0; e < sample.size(); ++e) {
        const auto& traj = sample[e];
        double g = 1.0;
        for (int i = 0; i < traj.horizon(); ++i) {
            policy.accumulate_score(i, traj.states[i], traj.actions[i], inv_n * g * weights[e][i],
                                    grad);
            g *= disc.gamma;
        }
    }
    return grad;
}

}  // namespace

std::vector<std::vector<double>> reward_to_go(const std::vector<Trajectory>& sample, double gamma) {
    std::vector<std::vector<double>> r(sample.size());
    for (std::size_t e = 0; e < sample.size(); ++e) {
        const auto& traj = sample[e];
        const int H = traj.horizon();
        r[e].assign(H, 0.0);
        double tail = 0.0;
        for (int i = H - 1; i >= 0; --i) {
            tail = traj.rewards[i] + gamma * tail;
            r[e][i] = tail;
        }
    }
    return r;
}

std::vector<double> ivo_gradient(const std::vector<Trajectory>& sample,
                                 const CriticEstimate& critic, const DifferentiablePolicy& policy,
                                 const DiscountSpec& disc, const GradientOptions& opts) {
    if (critic.x_values.size() != sample.size())
        throw std::invalid_argument("ivo_gradient: critic/sample size mismatch");
    return score_estimator(sample, critic.x_values, policy, disc, opts);
}

std::vector<double> return_gradient(const std::vector<Trajectory>& sample,
                                    const DifferentiablePolicy& policy, const DiscountSpec& disc,
                                    const GradientOptions& opts) {
    return score_estimator(sample, reward_to_go(sample, disc.gamma), policy, disc, opts);
}

std::vector<double> trvo_penalty_gradient(const std::vector<Trajectory>& sample, double beta,
                                          const DifferentiablePolicy& policy,
                                          const DiscountSpec& disc, const GradientOptions& opts) {
    const double j = j_pi(sample, disc);
    const auto critic = homog_critic(sample, j, beta, disc);
    auto grad = score_estimator(sample, critic.x_values, policy, disc, opts);

    // The penalty also depends on the parameters through J itself. That
    // contribution is -2 beta grad(J) E[sum gamma^{i-1} (r_i - J)], which is
    // exactly zero for deterministic horizons once J is the sample estimate.
    KahanSum dev;
    for (const auto& traj : sample) {
        double g = 1.0;
        for (double r : traj.rewards) {
            dev.add(g * (r - j));
            g *= disc.gamma;
        }
    }
    const double c0 = dev.value() / static_cast<double>(sample.size());
    if (c0 != 0.0) {
        std::vector<double> grad_j(policy.n_params(), 0.0);
        const double inv_n = 1.0 / static_cast<double>(sample.size());
        for (const auto& traj : sample) {
            const double weight =
                discounted_return(traj, disc) / cumulated_discount(traj.horizon(), disc.gamma) - j;
            for (int i = 0; i < traj.horizon(); ++i)
                policy.accumulate_score(i, traj.states[i], traj.actions[i], inv_n * weight, grad_j);
        }
        for (int k = 0; k < policy.n_params(); ++k) grad[k] += -2.0 * beta * c0 * grad_j[k];
    }
    return grad;
}

}  // namespace ivo
