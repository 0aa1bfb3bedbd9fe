#pragma once

#include <future>
#include <stdexcept>
#include <vector>

#include "ivo/env.hpp"
#include "ivo/policy.hpp"
#include "ivo/rng.hpp"
#include "ivo/types.hpp"

namespace ivo {

inline void check_action_spaces(const EnvModel& env, const Policy& policy) {
    const auto e = env.action_space();
    const auto p = policy.action_space();
    if (e.kind != p.kind) throw std::invalid_argument("rollout: policy/env action space kind mismatch");
    if (e.kind == ActionSpace::Kind::finite && p.n > e.n)
        throw std::invalid_argument("rollout: policy has more actions than the environment");
}

/// Roll one episode. Stops at a terminal state or at the environment's
/// horizon cap; identical (env, policy parameters, rng seed) reproduce the
/// trajectory exactly.
inline Trajectory rollout(const EnvModel& env, const Policy& policy, Rng& rng) {
    check_action_spaces(env, policy);
    const int cap = env.max_horizon();
    if (cap == DiscountSpec::kUnbounded)
        throw std::invalid_argument("rollout: environment must declare a finite horizon cap");

    Trajectory traj;
    traj.states.push_back(env.initial_state(rng));
    for (int i = 0; i < cap && !env.terminal(traj.states.back()); ++i) {
        const double a = policy.sample_action(i, traj.states.back(), rng);
        auto [next, reward] = env.step(i, traj.states.back(), a, rng);
        traj.actions.push_back(a);
        traj.rewards.push_back(reward);
        traj.states.push_back(std::move(next));
    }
    if (traj.rewards.empty()) throw std::runtime_error("rollout: episode terminated before the first step");
    return traj;
}

/// Collect `n` episodes with per-episode generators split from `root`.
/// Episode k is produced by root.split(k) regardless of worker count, so the
/// batch is reproducible under any parallel partitioning.
inline std::vector<Trajectory> collect_batch(const EnvModel& env, const Policy& policy, int n,
                                             const Rng& root, int threads = 1) {
    std::vector<Trajectory> batch(n);
    auto worker = [&](int begin, int end) {
        for (int k = begin; k < end; ++k) {
            Rng rng = root.split(static_cast<std::uint64_t>(k));
            batch[k] = rollout(env, policy, rng);
        }
    };
    if (threads <= 1 || n < 2 * threads) {
        worker(0, n);
    } else {
        std::vector<std::future<void>> parts;
        const int chunk = (n + threads - 1) / threads;
        for (int b = 0; b < n; b += chunk)
            parts.push_back(std::async(std::launch::async, worker, b, std::min(n, b + chunk)));
        for (auto& f : parts) f.get();
    }
    return batch;
}

}  // namespace ivo
