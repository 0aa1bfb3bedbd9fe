#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ivo/env.hpp"
#include "ivo/loss.hpp"
#include "ivo/policy.hpp"
#include "ivo/targets.hpp"
#include "ivo/types.hpp"

namespace ivo {

/// Risk/performance summary of one policy on one environment.
struct RiskReport {
    double expected_return = 0.0;
    double inhom_volatility = 0.0;  // E[sum gamma^{i-1} l(r_i - target_i)], beta inside l
    double homog_volatility = 0.0;  // nu^2-hat, beta multiplies externally
    double return_variance = 0.0;   // sigma^2
    double objective = 0.0;         // expected_return - inhom_volatility
    double j_pi = 0.0;              // E[Gamma^-1 G]
    int n_episodes = 0;

    std::vector<std::pair<std::string, double>> fields() const {
        return {{"expected_return", expected_return},
                {"inhom_volatility", inhom_volatility},
                {"homog_volatility", homog_volatility},
                {"return_variance", return_variance},
                {"objective", objective},
                {"j_pi", j_pi},
                {"n_episodes", static_cast<double>(n_episodes)}};
    }
};

/// Empirical mean over episodes of sum_i gamma^{i-1} l(r_i - target_i).
/// Steps beyond an episode's realized horizon are excluded (the paper-side
/// indicator convention); an episode longer than the schedule is an error.
double inhom_penalty(const std::vector<Trajectory>& sample, const TargetSchedule& targets,
                     const LossSpec& loss, const DiscountSpec& disc);

/// Homogeneous counterpart: J = mean of Gamma_e^-1 G_e, then the empirical
/// mean of sum_i gamma^{i-1} (r_i - J)^2. The risk-aversion coefficient
/// multiplies externally.
double homog_penalty(const std::vector<Trajectory>& sample, const DiscountSpec& disc);

double j_pi(const std::vector<Trajectory>& sample, const DiscountSpec& disc);

/// Plug-in (population) variance of the discounted return across episodes.
double return_variance(const std::vector<Trajectory>& sample, const DiscountSpec& disc);

/// Roll n episodes, fit the target schedule, and fill every report field.
RiskReport evaluate_policy(const EnvModel& env, const Policy& policy, const LossSpec& loss,
                           const DiscountSpec& disc, int n_episodes, std::uint64_t seed,
                           int threads = 1);

/// Report on an already collected sample.
RiskReport evaluate_sample(const std::vector<Trajectory>& sample, const LossSpec& loss,
                           const DiscountSpec& disc);

}  // namespace ivo
