#pragma once

#include <vector>

#include "ivo/critic.hpp"
#include "ivo/policy.hpp"
#include "ivo/types.hpp"

namespace ivo {

struct GradientOptions {
    /// Subtract an action-independent baseline from the weighting terms:
    /// per-(step, state) for tabular policies, per-step otherwise.
    bool baseline = false;
};

/// Score-function estimator of the gradient of the inhomogeneous
/// l-volatility: mean over episodes of sum_i gamma^i X-hat_i score_i.
std::vector<double> ivo_gradient(const std::vector<Trajectory>& sample,
                                 const CriticEstimate& critic, const DifferentiablePolicy& policy,
                                 const DiscountSpec& disc, const GradientOptions& opts = {});

/// Score-function estimator of grad E[G] with causal reward-to-go weights.
std::vector<double> return_gradient(const std::vector<Trajectory>& sample,
                                    const DifferentiablePolicy& policy, const DiscountSpec& disc,
                                    const GradientOptions& opts = {});

/// Discounted reward-to-go R-hat_i = sum_{j>i} gamma^{j-i-1} r_j per episode.
std::vector<std::vector<double>> reward_to_go(const std::vector<Trajectory>& sample, double gamma);

/// Gradient of the homogeneous penalty beta * nu^2-hat. J is re-estimated
/// from the sample; its own parameter dependence contributes an extra score
/// term that vanishes automatically for deterministic horizons.
std::vector<double> trvo_penalty_gradient(const std::vector<Trajectory>& sample, double beta,
                                          const DifferentiablePolicy& policy,
                                          const DiscountSpec& disc,
                                          const GradientOptions& opts = {});

}  // namespace ivo
