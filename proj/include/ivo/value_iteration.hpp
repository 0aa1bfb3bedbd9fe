#pragma once

#include <vector>

#include "ivo/env.hpp"
#include "ivo/loss.hpp"
#include "ivo/policy.hpp"
#include "ivo/targets.hpp"
#include "ivo/types.hpp"

namespace ivo {

struct ValueIterationResult {
    GreedyTablePolicy policy;
    double value;                         // optimal value under the initial distribution
    std::vector<std::vector<double>> v;   // v[i][s], i = 0..H-1
};

/// Exact time-indexed dynamic program for the inner problem of the bilevel
/// formulation: maximize E[sum gamma^{i-1} (r_i - l(r_i - target_i))].
/// Ties between actions break toward the lowest index, so greedy paths are
/// deterministic.
ValueIterationResult value_iteration_modified(const TabularEnv& env, const TargetSchedule& targets,
                                              const LossSpec& loss, const DiscountSpec& disc);

}  // namespace ivo
