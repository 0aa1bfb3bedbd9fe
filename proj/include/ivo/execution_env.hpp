#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ivo/env.hpp"
#include "ivo/policy.hpp"

namespace ivo {

/// Discrete liquidation model: arithmetic Brownian unaffected price, linear
/// permanent impact g per share, and execution prices worse than the
/// pre-trade reference by a fixed spread plus a linear temporary term.
/// Defaults follow the classical benchmark parameter set.
struct ExecutionConfig {
    double s0 = 50.0;             // initial price (currency)
    double sigma = 0.95;          // price volatility (currency / sqrt(day))
    double g = 2.5e-7;            // permanent impact (currency per share)
    double epsilon_cost = 0.0625; // fixed spread cost (currency)
    double eta = 2.5e-6;          // temporary impact slope (currency per share)
    double dt = 1.0;              // step length (day)
    double horizon_days = 5.0;    // T (day)
    double n0 = 1e6;              // initial shares
    bool allow_buying = false;    // widen the action space to [-1, 1]

    void validate() const {
        if (s0 <= 0 || sigma < 0 || g < 0 || epsilon_cost < 0 || eta < 0 || dt <= 0 ||
            horizon_days <= 0 || n0 <= 0)
            throw std::invalid_argument("execution config: parameters must be positive");
        const double steps = horizon_days / dt;
        if (std::abs(steps - std::round(steps)) > 1e-9)
            throw std::invalid_argument("execution config: T/dt must be an integer");
    }

    int n_steps() const { return static_cast<int>(std::round(horizon_days / dt)); }
    double notional() const { return n0 * s0; }
};

/// State is (t/T, S_t, N_t). The action is the fraction of the remaining
/// inventory to sell this step (n < 0 means selling); the final step ignores
/// the action and liquidates the remainder, so N_T == 0 on every episode.
/// With `normalized` set, rewards are divided by N_0 S_0 for solver
/// consumption; reports convert back to raw currency.
class ExecutionEnv : public EnvModel {
  public:
    explicit ExecutionEnv(ExecutionConfig cfg, bool normalized = false)
        : cfg_(cfg), scale_(normalized ? cfg.notional() : 1.0) {
        cfg_.validate();
    }

    const ExecutionConfig& config() const { return cfg_; }
    double reward_scale() const { return scale_; }

    StateVec initial_state(Rng&) const override { return {0.0, cfg_.s0, cfg_.n0}; }

    StepResult step(int step, const StateVec& state, double action, Rng& rng) const override {
        const int H = cfg_.n_steps();
        const double price = state[1];
        const double shares = state[2];

        double fraction;
        if (step == H - 1) {
            fraction = 1.0;  // forced completion
        } else {
            fraction = std::clamp(action, cfg_.allow_buying ? -1.0 : 0.0, 1.0);
        }
        const double traded = -fraction * shares;  // signed; selling is negative

        // Price diffuses over the period, then the trade executes at the
        // pre-trade reference plus temporary terms; its own permanent impact
        // moves the reference only afterwards.
        const double next_price = price + cfg_.sigma * std::sqrt(cfg_.dt) * rng.normal();
        const double mark_before = shares * (price + cfg_.g * (shares - cfg_.n0));
        const double x_pre = next_price + cfg_.g * (shares - cfg_.n0);
        const double sign = traded > 0.0 ? 1.0 : (traded < 0.0 ? -1.0 : 0.0);
        const double exec_price = x_pre + sign * (cfg_.epsilon_cost + cfg_.eta * std::abs(traded));

        const double next_shares = shares + traded;
        const double mark_after = next_shares * (next_price + cfg_.g * (next_shares - cfg_.n0));
        const double cash_flow = -traded * exec_price;
        const double reward = (mark_after + cash_flow - mark_before) / scale_;

        const double t_next = static_cast<double>(step + 1) / H;
        return {{t_next, next_price, next_shares}, reward};
    }

    bool terminal(const StateVec& state) const override { return state[0] >= 1.0; }
    ActionSpace action_space() const override {
        return ActionSpace::interval(cfg_.allow_buying ? -1.0 : 0.0, 1.0);
    }
    int max_horizon() const override { return cfg_.n_steps(); }
    int state_dim() const override { return 3; }

  private:
    ExecutionConfig cfg_;
    double scale_;
};

/// Gaussian policy over the sell fraction, squashed to (0, 1), with a linear
/// mean on (1, t/T, N/N_0, (S - S_0)/S_0).
inline GaussianPolicy make_execution_policy(const ExecutionConfig& cfg, double init_log_std = -1.0) {
    const double s0 = cfg.s0;
    const double n0 = cfg.n0;
    auto features = [s0, n0](const StateVec& state) {
        return std::vector<double>{1.0, state[0], state[2] / n0, (state[1] - s0) / s0};
    };
    GaussianPolicy policy(4, features, /*squash=*/true, init_log_std);
    return policy;
}

}  // namespace ivo
