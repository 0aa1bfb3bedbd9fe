#pragma once

#include <cstdint>

#include "ivo/env.hpp"
#include "ivo/loss.hpp"
#include "ivo/solve_result.hpp"

namespace ivo {

struct NestedConfig {
    int budget = 2000;             // inner DP evaluations
    int restarts = 5;
    double initial_step = 1.0;     // coordinate step before halving
    double step_tolerance = 1e-6;  // stop once the step drops below this
    bool warm_start = true;        // reuse cached inner solves across evaluations
    std::uint64_t seed = 0;        // restart perturbations
    int eval_episodes = 2000;      // fresh Monte-Carlo evaluation for the report
    std::uint64_t eval_seed = 9001;
};

/// Bilevel solver: derivative-free coordinate descent with step halving and
/// random restarts over the per-step target vector; every evaluation solves
/// the inner problem exactly by time-indexed value iteration. The returned
/// result carries a fixed-point certificate: the gap between the achieved
/// modified value and its value after re-fitting targets under the returned
/// policy.
SolveResult nested_solve(const TabularEnv& env, const LossSpec& loss, const DiscountSpec& disc,
                         const NestedConfig& cfg = {});

}  // namespace ivo
