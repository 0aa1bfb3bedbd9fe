#pragma once

#include <vector>

#include "ivo/env.hpp"
#include "ivo/loss.hpp"
#include "ivo/policy.hpp"
#include "ivo/risk.hpp"
#include "ivo/targets.hpp"
#include "ivo/types.hpp"

namespace ivo {

/// Action probabilities of a policy at one (step, state) of a tabular
/// environment (softmax rows, or a point mass for deterministic tables).
std::vector<double> action_probs(const Policy& policy, int step, int state, int n_actions);

/// Exact (no sampling) analysis of a fixed policy on a tabular environment:
/// forward alive marginals for the per-step quantities, backward moment
/// recursions for the return variance, and backward induction for the
/// action-volatility function. Population values, not estimates.
class ExactTabular {
  public:
    ExactTabular(const TabularEnv& env, const Policy& policy, const DiscountSpec& disc);

    double expected_return() const { return expected_return_; }
    /// P(episode still running at step `i`+1), i.e. P(eps >= i+1), 0-based i.
    double alive_prob(int i) const { return alive_prob_[i]; }
    /// E[Gamma_eps] over the (possibly random) episode length.
    double expected_cumulated_discount() const;
    /// E[Gamma_eps^{-1} G].
    double j_value() const;
    /// Conditional mean reward r-bar_{i+1} given eps >= i+1, 0-based i.
    double conditional_mean(int i) const;
    int horizon() const { return horizon_; }

    /// E[sum_i gamma^{i-1} l(r_i - t_i)] at the given target schedule.
    double penalty_at(const TargetSchedule& targets, const LossSpec& loss) const;
    /// Per-step minimizers of the exact conditional expected penalty.
    TargetSchedule optimal_targets(const LossSpec& loss) const;
    /// Inhomogeneous l-volatility: penalty at its optimal targets.
    double inhom_volatility(const LossSpec& loss) const;
    /// Homogeneous counterpart nu^2-hat (no beta).
    double homog_volatility() const;
    double return_variance() const;
    /// E[sum gamma^{i-1} (r_i - l(r_i - t_i))], the modified-reward value.
    double modified_value(const TargetSchedule& targets, const LossSpec& loss) const;

    /// X_{pi,i}(s,a) by backward induction on the Bellman-like recursion;
    /// zero at terminal states and at the horizon.
    std::vector<std::vector<std::vector<double>>> x_table(const TargetSchedule& targets,
                                                          const LossSpec& loss) const;
    /// Largest absolute residual of the Bellman-like recursion over all
    /// (step, state, action) entries of an X table.
    double bellman_residual(const std::vector<std::vector<std::vector<double>>>& x,
                            const TargetSchedule& targets, const LossSpec& loss) const;
    /// Exact expectation of the score-function gradient estimator of the
    /// inhomogeneous volatility for a differentiable policy.
    std::vector<double> exact_risk_gradient(const TargetSchedule& targets, const LossSpec& loss,
                                            const DifferentiablePolicy& policy) const;
    /// Exact expectation of the score-function gradient estimator of E[G].
    std::vector<double> exact_return_gradient(const DifferentiablePolicy& policy) const;

    RiskReport report(const LossSpec& loss) const;

  private:
    struct WeightedReward {
        double reward;
        double weight;
    };

    const TabularEnv& env_;
    const Policy& policy_;
    DiscountSpec disc_;
    int horizon_;

    // alive_[i][s] = P(s_i = s, eps > i): mass still running before action i.
    std::vector<std::vector<double>> alive_;
    std::vector<double> alive_prob_;                    // P(eps >= i+1)
    std::vector<std::vector<WeightedReward>> rewards_;  // per-step reward law (unconditional weights)
    std::vector<double> horizon_mass_;                  // P(eps == h), h = 1..H
    std::vector<double> return_by_horizon_;             // E[G I(eps == h)]

    double expected_return_;
};

}  // namespace ivo
