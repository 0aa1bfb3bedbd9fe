#include "ivo/nested.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <utility>

#include "ivo/exact.hpp"
#include "ivo/value_iteration.hpp"

namespace ivo {

namespace {

struct InnerSolver {
    const TabularEnv& env;
    const LossSpec& loss;
    const DiscountSpec& disc;
    bool use_cache;
    int evaluations = 0;
    std::map<std::vector<double>, double> cache;
    double best_value = -1e300;
    std::vector<double> best_targets;
    std::vector<double> trace;

    double evaluate(const std::vector<double>& t) {
        if (use_cache) {
            auto it = cache.find(t);
            if (it != cache.end()) return it->second;
        }
        ++evaluations;
        TargetSchedule schedule;
        schedule.targets = t;
        const double value = value_iteration_modified(env, schedule, loss, disc).value;
        if (use_cache) cache.emplace(t, value);
        if (value > best_value) {
            best_value = value;
            best_targets = t;
        }
        trace.push_back(best_value);
        return value;
    }

    GreedyTablePolicy solve(const std::vector<double>& t) {
        TargetSchedule schedule;
        schedule.targets = t;
        return value_iteration_modified(env, schedule, loss, disc).policy;
    }
};

// Block-coordinate fixed-point iterations: alternate the exact inner solve
// with an exact target re-fit under the resulting policy. Both half-steps
// increase the modified value, so this converges fast to a bi-stationary
// point and provides the coordinate descent with a good starting guess.
std::vector<double> fixed_point_warmup(InnerSolver& inner, std::vector<double> t, int max_rounds,
                                       int budget) {
    double value = inner.evaluate(t);
    for (int round = 0; round < max_rounds && inner.evaluations < budget; ++round) {
        const auto policy = inner.solve(t);
        ExactTabular exact(inner.env, policy, inner.disc);
        std::vector<double> refit = exact.optimal_targets(inner.loss).targets;
        if (refit == t) break;
        const double new_value = inner.evaluate(refit);
        if (new_value <= value + 1e-15) break;
        value = new_value;
        t = std::move(refit);
    }
    return t;
}

// Coordinate descent with step halving; returns false if the budget ran out
// before the step shrank below the tolerance.
bool coordinate_descent(InnerSolver& inner, std::vector<double> t, double step, double tol,
                        int budget) {
    double current = inner.evaluate(t);
    while (step >= tol) {
        bool improved = false;
        for (std::size_t i = 0; i < t.size(); ++i) {
            for (const double delta : {step, -step}) {
                if (inner.evaluations >= budget) return false;
                std::vector<double> candidate = t;
                candidate[i] += delta;
                const double value = inner.evaluate(candidate);
                if (value > current) {
                    current = value;
                    t = std::move(candidate);
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return true;
}

void reward_range(const TabularEnv& env, double& lo, double& hi) {
    lo = 1e300;
    hi = -1e300;
    for (int s = 0; s < env.n_states(); ++s) {
        if (env.terminal_state(s)) continue;
        for (int a = 0; a < env.n_actions(); ++a)
            for (const auto& o : env.outcomes(0, s, a)) {
                lo = std::min(lo, o.reward);
                hi = std::max(hi, o.reward);
            }
    }
    if (lo > hi) lo = hi = 0.0;
}

}  // namespace

SolveResult nested_solve(const TabularEnv& env, const LossSpec& loss, const DiscountSpec& disc,
                         const NestedConfig& cfg) {
    const auto start_time = std::chrono::steady_clock::now();
    const int H = env.horizon();

    InnerSolver inner{env, loss, disc, cfg.warm_start};

    double reward_lo, reward_hi;
    reward_range(env, reward_lo, reward_hi);
    const double spread = std::max(1.0, reward_hi - reward_lo);

    // Initial guess: conditional mean rewards of the risk-neutral solution.
    TargetSchedule zero;
    zero.targets.assign(H, 0.0);
    const auto neutral = value_iteration_modified(env, zero, LossSpec(LossKind::none, 1.0), disc);
    ++inner.evaluations;
    ExactTabular neutral_exact(env, neutral.policy, disc);
    std::vector<double> t0(H, 0.0);
    for (int i = 0; i < H; ++i) t0[i] = neutral_exact.conditional_mean(i);

    bool converged = true;
    Rng rng(cfg.seed);
    for (int r = 0; r <= cfg.restarts && inner.evaluations < cfg.budget; ++r) {
        std::vector<double> init;
        if (r == 0) {
            init = t0;
        } else if (r == 1) {
            init.assign(H, reward_lo);  // pessimistic plan
        } else if (r == 2) {
            init.assign(H, reward_hi);  // optimistic plan
        } else if (inner.best_targets.empty() || r % 2 == 1) {
            init.assign(H, 0.0);
            for (double& v : init) v = reward_lo + (reward_hi - reward_lo) * rng.u01();
        } else {
            init = inner.best_targets;
            for (double& v : init) v += 0.25 * spread * rng.normal();
        }
        init = fixed_point_warmup(inner, std::move(init), 50, cfg.budget);
        const bool ok =
            coordinate_descent(inner, init, cfg.initial_step, cfg.step_tolerance, cfg.budget);
        converged = converged && ok;
    }
    // One final descent from the incumbent so the best point itself is polished.
    if (inner.evaluations < cfg.budget)
        converged =
            coordinate_descent(inner, inner.best_targets, cfg.initial_step, cfg.step_tolerance,
                               cfg.budget) &&
            converged;

    TargetSchedule best;
    best.targets = inner.best_targets;
    best.support_counts.assign(H, 0);
    auto solved = value_iteration_modified(env, best, loss, disc);

    SolveResult result;
    result.policy = std::make_shared<GreedyTablePolicy>(solved.policy);
    result.targets = best;
    result.trace = std::move(inner.trace);
    result.seed = cfg.seed;
    result.iterations = inner.evaluations;
    result.converged = converged;

    // Fixed-point certificate: re-fitting the targets exactly under the
    // returned policy cannot improve the modified value at a bilevel optimum.
    ExactTabular exact(env, solved.policy, disc);
    const TargetSchedule refit = exact.optimal_targets(loss);
    result.fixed_point_gap = exact.modified_value(refit, loss) - exact.modified_value(best, loss);

    result.report =
        evaluate_policy(env, *result.policy, loss, disc, cfg.eval_episodes, cfg.eval_seed);

    result.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return result;
}

}  // namespace ivo
