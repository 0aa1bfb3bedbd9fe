#include "ivo/value_iteration.hpp"

#include <stdexcept>

namespace ivo {

ValueIterationResult value_iteration_modified(const TabularEnv& env, const TargetSchedule& targets,
                                              const LossSpec& loss, const DiscountSpec& disc) {
    const int S = env.n_states();
    const int A = env.n_actions();
    const int H = env.horizon();
    if (targets.size() < H)
        throw std::invalid_argument("value_iteration: target schedule shorter than the horizon");

    ValueIterationResult result{GreedyTablePolicy(H, S, A), 0.0,
                                std::vector(H, std::vector<double>(S, 0.0))};
    std::vector<double> v_next(S, 0.0);
    for (int i = H - 1; i >= 0; --i) {
        auto& v = result.v[i];
        for (int s = 0; s < S; ++s) {
            if (env.terminal_state(s)) {
                v[s] = 0.0;
                continue;
            }
            double best = 0.0;
            int best_a = 0;
            for (int a = 0; a < A; ++a) {
                KahanSum q;
                for (const auto& o : env.outcomes(i, s, a)) {
                    const double modified = o.reward - loss.evaluate(o.reward - targets.targets[i]);
                    const bool cont = !env.terminal_state(o.next_state) && i + 1 < H;
                    q.add(o.prob * (modified + (cont ? disc.gamma * v_next[o.next_state] : 0.0)));
                }
                if (a == 0 || q.value() > best) {
                    best = q.value();
                    best_a = a;
                }
            }
            v[s] = best;
            result.policy.action_at(i, s) = best_a;
        }
        v_next = v;
    }

    KahanSum value;
    for (const auto& [s, p] : env.initial_distribution()) value.add(p * result.v[0][s]);
    result.value = value.value();
    return result;
}

}  // namespace ivo
