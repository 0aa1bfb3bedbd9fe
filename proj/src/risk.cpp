#include "ivo/risk.hpp"

#include <stdexcept>

#include "ivo/rollout.hpp"

namespace ivo {

double inhom_penalty(const std::vector<Trajectory>& sample, const TargetSchedule& targets,
                     const LossSpec& loss, const DiscountSpec& disc) {
    if (sample.empty()) throw std::invalid_argument("inhom_penalty: empty sample");
    KahanSum total;
    for (const auto& traj : sample) {
        if (traj.horizon() > targets.size())
            throw std::invalid_argument("inhom_penalty: target schedule shorter than an episode");
        double g = 1.0;
        KahanSum ep;
        for (int i = 0; i < traj.horizon(); ++i) {
            ep.add(g * loss.evaluate(traj.rewards[i] - targets.targets[i]));
            g *= disc.gamma;
        }
        total.add(ep.value());
    }
    return total.value() / static_cast<double>(sample.size());
}

double j_pi(const std::vector<Trajectory>& sample, const DiscountSpec& disc) {
    if (sample.empty()) throw std::invalid_argument("j_pi: empty sample");
    KahanSum total;
    for (const auto& traj : sample)
        total.add(discounted_return(traj, disc) / cumulated_discount(traj.horizon(), disc.gamma));
    return total.value() / static_cast<double>(sample.size());
}

double homog_penalty(const std::vector<Trajectory>& sample, const DiscountSpec& disc) {
    const double j = j_pi(sample, disc);
    KahanSum total;
    for (const auto& traj : sample) {
        double g = 1.0;
        KahanSum ep;
        for (double r : traj.rewards) {
            const double d = r - j;
            ep.add(g * d * d);
            g *= disc.gamma;
        }
        total.add(ep.value());
    }
    return total.value() / static_cast<double>(sample.size());
}

double return_variance(const std::vector<Trajectory>& sample, const DiscountSpec& disc) {
    if (sample.empty()) throw std::invalid_argument("return_variance: empty sample");
    KahanSum sum;
    for (const auto& traj : sample) sum.add(discounted_return(traj, disc));
    const double mean = sum.value() / static_cast<double>(sample.size());
    KahanSum sq;
    for (const auto& traj : sample) {
        const double d = discounted_return(traj, disc) - mean;
        sq.add(d * d);
    }
    return sq.value() / static_cast<double>(sample.size());
}

RiskReport evaluate_sample(const std::vector<Trajectory>& sample, const LossSpec& loss,
                           const DiscountSpec& disc) {
    if (sample.size() < 2) throw std::invalid_argument("evaluate: need at least 2 episodes");
    const TargetSchedule targets = fit_targets(sample, loss, disc);

    RiskReport report;
    report.n_episodes = static_cast<int>(sample.size());
    KahanSum ret;
    for (const auto& traj : sample) ret.add(discounted_return(traj, disc));
    report.expected_return = ret.value() / static_cast<double>(sample.size());
    report.inhom_volatility = inhom_penalty(sample, targets, loss, disc);
    report.homog_volatility = homog_penalty(sample, disc);
    report.return_variance = return_variance(sample, disc);
    report.j_pi = j_pi(sample, disc);
    report.objective = report.expected_return - report.inhom_volatility;
    return report;
}

RiskReport evaluate_policy(const EnvModel& env, const Policy& policy, const LossSpec& loss,
                           const DiscountSpec& disc, int n_episodes, std::uint64_t seed,
                           int threads) {
    if (n_episodes < 2) throw std::invalid_argument("evaluate_policy: need at least 2 episodes");
    const auto sample = collect_batch(env, policy, n_episodes, Rng(seed), threads);
    return evaluate_sample(sample, loss, disc);
}

}  // namespace ivo
