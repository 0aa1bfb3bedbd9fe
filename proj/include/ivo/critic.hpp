#pragma once

#include <vector>

#include "ivo/loss.hpp"
#include "ivo/targets.hpp"
#include "ivo/types.hpp"

namespace ivo {

/// Monte-Carlo estimate of the action-volatility function X along a batch:
/// x_values[e][i] is the discounted tail of penalties from step i of episode
/// e, current transition included (X at the terminal state is the empty sum).
struct CriticEstimate {
    std::vector<std::vector<double>> x_values;
    TargetSchedule targets;
};

/// Forward tail sums X-hat_i = sum_{j>i} gamma^{j-i-1} l(r_j - t_j); the
/// targets must have been fitted on the same policy's sample.
CriticEstimate ivo_critic(const std::vector<Trajectory>& sample, const TargetSchedule& targets,
                          const LossSpec& loss, const DiscountSpec& disc);

/// Same tail structure for the homogeneous penalty beta (r - J)^2.
CriticEstimate homog_critic(const std::vector<Trajectory>& sample, double j_value, double beta,
                            const DiscountSpec& disc);

/// Table critic for tabular environments: per-(step, state, action) averages
/// of the Monte-Carlo tails, zero at terminal states.
std::vector<std::vector<std::vector<double>>> fit_x_table(const std::vector<Trajectory>& sample,
                                                          const CriticEstimate& critic, int n_steps,
                                                          int n_states, int n_actions);

}  // namespace ivo
