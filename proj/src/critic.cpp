#include "ivo/critic.hpp"

#include <functional>
#include <stdexcept>

namespace ivo {

namespace {

std::vector<std::vector<double>> tail_sums(const std::vector<Trajectory>& sample, double gamma,
                                           const std::function<double(int, double)>& penalty) {
    std::vector<std::vector<double>> x(sample.size());
    for (std::size_t e = 0; e < sample.size(); ++e) {
        const auto& traj = sample[e];
        const int H = traj.horizon();
        x[e].assign(H, 0.0);
        double tail = 0.0;
        for (int i = H - 1; i >= 0; --i) {
            tail = penalty(i, traj.rewards[i]) + gamma * tail;
            x[e][i] = tail;
        }
    }
    return x;
}

}  // namespace

CriticEstimate ivo_critic(const std::vector<Trajectory>& sample, const TargetSchedule& targets,
                          const LossSpec& loss, const DiscountSpec& disc) {
    for (const auto& traj : sample)
        if (traj.horizon() > targets.size())
            throw std::invalid_argument("critic: target schedule shorter than an episode");
    CriticEstimate critic;
    critic.targets = targets;
    critic.x_values = tail_sums(sample, disc.gamma, [&](int i, double r) {
        return loss.evaluate(r - targets.targets[i]);
    });
    return critic;
}

CriticEstimate homog_critic(const std::vector<Trajectory>& sample, double j_value, double beta,
                            const DiscountSpec& disc) {
    CriticEstimate critic;
    critic.x_values = tail_sums(sample, disc.gamma, [&](int, double r) {
        const double d = r - j_value;
        return beta * d * d;
    });
    return critic;
}

std::vector<std::vector<std::vector<double>>> fit_x_table(const std::vector<Trajectory>& sample,
                                                          const CriticEstimate& critic, int n_steps,
                                                          int n_states, int n_actions) {
    std::vector table(n_steps, std::vector(n_states, std::vector<double>(n_actions, 0.0)));
    std::vector counts(n_steps, std::vector(n_states, std::vector<long>(n_actions, 0L)));
    for (std::size_t e = 0; e < sample.size(); ++e) {
        const auto& traj = sample[e];
        for (int i = 0; i < traj.horizon(); ++i) {
            const int s = state_index(traj.states[i]);
            const int a = static_cast<int>(traj.actions[i]);
            table[i][s][a] += critic.x_values[e][i];
            counts[i][s][a] += 1;
        }
    }
    for (int i = 0; i < n_steps; ++i)
        for (int s = 0; s < n_states; ++s)
            for (int a = 0; a < n_actions; ++a)
                if (counts[i][s][a] > 0) table[i][s][a] /= static_cast<double>(counts[i][s][a]);
    return table;
}

}  // namespace ivo
