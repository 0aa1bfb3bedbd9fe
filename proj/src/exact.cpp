#include "ivo/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ivo {

std::vector<double> action_probs(const Policy& policy, int step, int state, int n_actions) {
    if (const auto* softmax = dynamic_cast<const TabularSoftmaxPolicy*>(&policy))
        return softmax->probs(step, state);
    if (const auto* greedy = dynamic_cast<const GreedyTablePolicy*>(&policy)) {
        std::vector<double> p(n_actions, 0.0);
        p[greedy->action_at(step, state)] = 1.0;
        return p;
    }
    throw std::invalid_argument("action_probs: policy is not tabular");
}

ExactTabular::ExactTabular(const TabularEnv& env, const Policy& policy, const DiscountSpec& disc)
    : env_(env), policy_(policy), disc_(disc), horizon_(env.horizon()) {
    const int S = env_.n_states();
    const int A = env_.n_actions();
    const int H = horizon_;

    alive_.assign(H, std::vector<double>(S, 0.0));
    alive_prob_.assign(H, 0.0);
    rewards_.assign(H, {});
    horizon_mass_.assign(H + 1, 0.0);       // index h = episode length
    return_by_horizon_.assign(H + 1, 0.0);

    for (const auto& [s, p] : env_.initial_distribution()) alive_[0][s] += p;

    // Forward sweep: propagate the alive mass, record the per-step reward
    // law, and split off the mass that terminates at each length. The
    // expected return conditional on the termination length is accumulated
    // through per-state running reward expectations.
    //
    // running_[s] = E[sum_{j<=i} gamma^{j-1} r_j ; s_i = s, eps > i]
    std::vector<double> running(S, 0.0), running_next(S, 0.0);
    double g = 1.0;  // gamma^{i}
    for (int i = 0; i < H; ++i) {
        std::vector<double> next(S, 0.0);
        std::fill(running_next.begin(), running_next.end(), 0.0);
        auto& law = rewards_[i];
        for (int s = 0; s < S; ++s) {
            const double mass = alive_[i][s];
            if (mass <= 0.0) continue;
            alive_prob_[i] += mass;
            const auto probs = action_probs(policy_, i, s, A);
            for (int a = 0; a < A; ++a) {
                if (probs[a] <= 0.0) continue;
                for (const auto& o : env_.outcomes(i, s, a)) {
                    const double w = mass * probs[a] * o.prob;
                    if (w <= 0.0) continue;
                    // reward law entry (merge exact duplicates to keep supports small)
                    bool merged = false;
                    for (auto& wr : law)
                        if (wr.reward == o.reward) {
                            wr.weight += w;
                            merged = true;
                            break;
                        }
                    if (!merged) law.push_back({o.reward, w});

                    const double partial = (running[s] / mass) + g * o.reward;
                    if (env_.terminal_state(o.next_state) || i + 1 == H) {
                        horizon_mass_[i + 1] += w;
                        return_by_horizon_[i + 1] += w * partial;
                    } else {
                        next[o.next_state] += w;
                        running_next[o.next_state] += w * partial;
                    }
                }
            }
        }
        if (i + 1 < H) {
            alive_[i + 1] = next;
            std::swap(running, running_next);
        }
        g *= disc_.gamma;
    }

    KahanSum ret;
    for (int i = 0; i < H; ++i) {
        double gi = std::pow(disc_.gamma, i);
        for (const auto& wr : rewards_[i]) ret.add(gi * wr.weight * wr.reward);
    }
    expected_return_ = ret.value();
}

double ExactTabular::expected_cumulated_discount() const {
    KahanSum total;
    for (int h = 1; h <= horizon_; ++h)
        if (horizon_mass_[h] > 0.0)
            total.add(horizon_mass_[h] * cumulated_discount(h, disc_.gamma));
    return total.value();
}

double ExactTabular::j_value() const {
    KahanSum total;
    for (int h = 1; h <= horizon_; ++h)
        if (horizon_mass_[h] > 0.0)
            total.add(return_by_horizon_[h] / cumulated_discount(h, disc_.gamma));
    return total.value();
}

double ExactTabular::conditional_mean(int i) const {
    if (alive_prob_[i] <= 0.0) return 0.0;
    KahanSum sum;
    for (const auto& wr : rewards_[i]) sum.add(wr.weight * wr.reward);
    return sum.value() / alive_prob_[i];
}

double ExactTabular::penalty_at(const TargetSchedule& targets, const LossSpec& loss) const {
    if (targets.size() < horizon_ && alive_prob_[targets.size()] > 0.0)
        throw std::invalid_argument("penalty_at: target schedule shorter than the horizon");
    KahanSum total;
    double g = 1.0;
    for (int i = 0; i < horizon_; ++i) {
        for (const auto& wr : rewards_[i])
            total.add(g * wr.weight * loss.evaluate(wr.reward - targets.targets[i]));
        g *= disc_.gamma;
    }
    return total.value();
}

TargetSchedule ExactTabular::optimal_targets(const LossSpec& loss) const {
    TargetSchedule schedule;
    schedule.targets.assign(horizon_, 0.0);
    schedule.support_counts.assign(horizon_, 0);
    for (int i = 0; i < horizon_; ++i) {
        const auto& law = rewards_[i];
        schedule.support_counts[i] = law.size();
        if (law.empty() || alive_prob_[i] <= 0.0) continue;
        switch (loss.closed_form_target()) {
            case TargetRule::mean:
                schedule.targets[i] = conditional_mean(i);
                break;
            case TargetRule::median: {
                auto sorted = law;
                std::sort(sorted.begin(), sorted.end(),
                          [](const WeightedReward& a, const WeightedReward& b) { return a.reward < b.reward; });
                const double half = 0.5 * alive_prob_[i];
                double cum = 0.0;
                for (std::size_t k = 0; k < sorted.size(); ++k) {
                    cum += sorted[k].weight;
                    if (cum >= half - 1e-15 * alive_prob_[i]) {
                        if (std::abs(cum - half) <= 1e-15 * alive_prob_[i] && k + 1 < sorted.size())
                            schedule.targets[i] = 0.5 * (sorted[k].reward + sorted[k + 1].reward);
                        else
                            schedule.targets[i] = sorted[k].reward;
                        break;
                    }
                }
                break;
            }
            case TargetRule::numeric: {
                auto objective = [&](double t) {
                    KahanSum sum;
                    for (const auto& wr : law) sum.add(wr.weight * loss.evaluate(wr.reward - t));
                    return sum.value();
                };
                schedule.targets[i] = minimize_convex_1d(objective, conditional_mean(i));
                break;
            }
        }
    }
    return schedule;
}

double ExactTabular::inhom_volatility(const LossSpec& loss) const {
    return penalty_at(optimal_targets(loss), loss);
}

double ExactTabular::homog_volatility() const {
    const double j = j_value();
    KahanSum total;
    double g = 1.0;
    for (int i = 0; i < horizon_; ++i) {
        for (const auto& wr : rewards_[i]) {
            const double d = wr.reward - j;
            total.add(g * wr.weight * d * d);
        }
        g *= disc_.gamma;
    }
    return total.value();
}

double ExactTabular::return_variance() const {
    // Backward recursion on first and second moments of the discounted tail:
    // the reward at a transition and the tail from the landing state are
    // conditionally independent given that state.
    const int S = env_.n_states();
    const int A = env_.n_actions();
    std::vector<double> t1(S, 0.0), t2(S, 0.0);  // tail moments from (i, s)
    for (int i = horizon_ - 1; i >= 0; --i) {
        std::vector<double> n1(S, 0.0), n2(S, 0.0);
        for (int s = 0; s < S; ++s) {
            if (env_.terminal_state(s)) continue;
            const auto probs = action_probs(policy_, i, s, A);
            KahanSum m1, m2;
            for (int a = 0; a < A; ++a) {
                if (probs[a] <= 0.0) continue;
                for (const auto& o : env_.outcomes(i, s, a)) {
                    const bool cont = !env_.terminal_state(o.next_state) && i + 1 < horizon_;
                    const double tail1 = cont ? t1[o.next_state] : 0.0;
                    const double tail2 = cont ? t2[o.next_state] : 0.0;
                    const double w = probs[a] * o.prob;
                    m1.add(w * (o.reward + disc_.gamma * tail1));
                    m2.add(w * (o.reward * o.reward + 2.0 * disc_.gamma * o.reward * tail1 +
                                disc_.gamma * disc_.gamma * tail2));
                }
            }
            n1[s] = m1.value();
            n2[s] = m2.value();
        }
        t1 = std::move(n1);
        t2 = std::move(n2);
    }
    KahanSum g1, g2;
    for (const auto& [s, p] : env_.initial_distribution()) {
        g1.add(p * t1[s]);
        g2.add(p * t2[s]);
    }
    return g2.value() - g1.value() * g1.value();
}

double ExactTabular::modified_value(const TargetSchedule& targets, const LossSpec& loss) const {
    KahanSum total;
    double g = 1.0;
    for (int i = 0; i < horizon_; ++i) {
        for (const auto& wr : rewards_[i])
            total.add(g * wr.weight * (wr.reward - loss.evaluate(wr.reward - targets.targets[i])));
        g *= disc_.gamma;
    }
    return total.value();
}

std::vector<std::vector<std::vector<double>>> ExactTabular::x_table(const TargetSchedule& targets,
                                                                    const LossSpec& loss) const {
    const int S = env_.n_states();
    const int A = env_.n_actions();
    const int H = horizon_;
    std::vector x(H, std::vector(S, std::vector<double>(A, 0.0)));
    // X at step i covers the penalty of r_{i+1} onward; the value-like
    // policy average of X_{i+1} feeds step i.
    std::vector<double> xbar_next(S, 0.0);
    for (int i = H - 1; i >= 0; --i) {
        std::vector<double> xbar(S, 0.0);
        for (int s = 0; s < S; ++s) {
            if (env_.terminal_state(s)) continue;
            const auto probs = action_probs(policy_, i, s, A);
            for (int a = 0; a < A; ++a) {
                KahanSum sum;
                for (const auto& o : env_.outcomes(i, s, a)) {
                    const bool cont = !env_.terminal_state(o.next_state) && i + 1 < H;
                    sum.add(o.prob * (loss.evaluate(o.reward - targets.targets[i]) +
                                      (cont ? disc_.gamma * xbar_next[o.next_state] : 0.0)));
                }
                x[i][s][a] = sum.value();
                xbar[s] += probs[a] * x[i][s][a];
            }
        }
        xbar_next = std::move(xbar);
    }
    return x;
}

double ExactTabular::bellman_residual(const std::vector<std::vector<std::vector<double>>>& x,
                                      const TargetSchedule& targets, const LossSpec& loss) const {
    const int S = env_.n_states();
    const int A = env_.n_actions();
    double worst = 0.0;
    for (int i = 0; i < horizon_; ++i)
        for (int s = 0; s < S; ++s) {
            if (env_.terminal_state(s)) continue;
            for (int a = 0; a < A; ++a) {
                // rhs = E[l(r_{i+1} - t_{i+1})] + gamma E[X_{i+1}(s', a')]
                KahanSum rhs;
                for (const auto& o : env_.outcomes(i, s, a)) {
                    rhs.add(o.prob * loss.evaluate(o.reward - targets.targets[i]));
                    if (!env_.terminal_state(o.next_state) && i + 1 < horizon_) {
                        const auto probs = action_probs(policy_, i + 1, o.next_state, A);
                        for (int b = 0; b < A; ++b)
                            rhs.add(o.prob * disc_.gamma * probs[b] * x[i + 1][o.next_state][b]);
                    }
                }
                worst = std::max(worst, std::abs(x[i][s][a] - rhs.value()));
            }
        }
    return worst;
}

std::vector<double> ExactTabular::exact_risk_gradient(const TargetSchedule& targets,
                                                      const LossSpec& loss,
                                                      const DifferentiablePolicy& policy) const {
    const auto x = x_table(targets, loss);
    const int S = env_.n_states();
    const int A = env_.n_actions();
    std::vector<double> grad(policy.n_params(), 0.0);
    double g = 1.0;
    for (int i = 0; i < horizon_; ++i) {
        for (int s = 0; s < S; ++s) {
            const double mass = alive_[i][s];
            if (mass <= 0.0) continue;
            const auto probs = action_probs(policy, i, s, A);
            const StateVec sv{static_cast<double>(s)};
            for (int a = 0; a < A; ++a) {
                if (probs[a] <= 0.0) continue;
                const double coeff = g * mass * probs[a] * x[i][s][a];
                policy.accumulate_score(i, sv, static_cast<double>(a), coeff, grad);
            }
        }
        g *= disc_.gamma;
    }
    return grad;
}

std::vector<double> ExactTabular::exact_return_gradient(const DifferentiablePolicy& policy) const {
    // E[sum_i gamma^i R_i score_i] with R_i the expected discounted tail
    // (current reward included) from (i, s, a).
    const int S = env_.n_states();
    const int A = env_.n_actions();
    const int H = horizon_;
    std::vector rtab(H, std::vector(S, std::vector<double>(A, 0.0)));
    std::vector<double> vbar_next(S, 0.0);
    for (int i = H - 1; i >= 0; --i) {
        std::vector<double> vbar(S, 0.0);
        for (int s = 0; s < S; ++s) {
            if (env_.terminal_state(s)) continue;
            const auto probs = action_probs(policy, i, s, A);
            for (int a = 0; a < A; ++a) {
                KahanSum sum;
                for (const auto& o : env_.outcomes(i, s, a)) {
                    const bool cont = !env_.terminal_state(o.next_state) && i + 1 < H;
                    sum.add(o.prob * (o.reward + (cont ? disc_.gamma * vbar_next[o.next_state] : 0.0)));
                }
                rtab[i][s][a] = sum.value();
                vbar[s] += probs[a] * rtab[i][s][a];
            }
        }
        vbar_next = std::move(vbar);
    }
    std::vector<double> grad(policy.n_params(), 0.0);
    double g = 1.0;
    for (int i = 0; i < H; ++i) {
        for (int s = 0; s < S; ++s) {
            const double mass = alive_[i][s];
            if (mass <= 0.0) continue;
            const auto probs = action_probs(policy, i, s, A);
            const StateVec sv{static_cast<double>(s)};
            for (int a = 0; a < A; ++a) {
                if (probs[a] <= 0.0) continue;
                policy.accumulate_score(i, sv, static_cast<double>(a), g * mass * probs[a] * rtab[i][s][a],
                                        grad);
            }
        }
        g *= disc_.gamma;
    }
    return grad;
}

RiskReport ExactTabular::report(const LossSpec& loss) const {
    RiskReport rep;
    rep.expected_return = expected_return_;
    rep.inhom_volatility = inhom_volatility(loss);
    rep.homog_volatility = homog_volatility();
    rep.return_variance = return_variance();
    rep.j_pi = j_value();
    rep.objective = rep.expected_return - rep.inhom_volatility;
    rep.n_episodes = 0;  // exact, not sampled
    return rep;
}

}  // namespace ivo
