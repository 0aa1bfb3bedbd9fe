#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "ivo/env.hpp"

namespace ivo {

/// Two-step environment: a_0 sets s_1 ~ N(a_0, a_0^2), then the state jumps
/// to 1 regardless of a_1. Rewards are the state increments r_1 = s_1 and
/// r_2 = 1 - s_1, so the return is identically 1 for every policy.
/// States are (step, s).
class ToyEnv : public EnvModel {
  public:
    /// Adjust s by at most a couple of ulps so that the two rewards
    /// (s, 1 - s) sum to exactly 1.0 in double arithmetic; the return
    /// identity is then bitwise, not approximate.
    static double snap_complement(double s) {
        for (int k = 0; k < 8; ++k) {
            const double r2 = 1.0 - s;
            if (s + r2 == 1.0) return s;
            s = 1.0 - r2;
        }
        return s;
    }

    StateVec initial_state(Rng&) const override { return {0.0, 0.0}; }

    StepResult step(int step, const StateVec& state, double action, Rng& rng) const override {
        if (step == 0) {
            const double s1 = snap_complement(action + std::abs(action) * rng.normal());
            return {{1.0, s1}, s1};
        }
        const double s1 = state[1];
        return {{2.0, 1.0}, 1.0 - s1};
    }

    bool terminal(const StateVec& state) const override { return state[0] >= 2.0; }
    ActionSpace action_space() const override { return ActionSpace::real_line(); }
    int max_horizon() const override { return 2; }
    int state_dim() const override { return 2; }
};

struct ToyClosedForm {
    double homog_argmin;
    double inhom_argmin;
};

/// Optimal first actions in closed form: the homogeneous criterion trades the
/// Gaussian variance against an even split of the unit return (argmin 1/4),
/// the inhomogeneous one only sees the variance (argmin 0). Both are
/// independent of the risk-aversion level.
inline ToyClosedForm toy_closed_form(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("toy_closed_form: beta must be positive");
    return {0.25, 0.0};
}

/// Tabular discretization of the toy problem for the bilevel solver: the
/// first action ranges over a uniform grid, and the Gaussian draw of s_1 is
/// replaced by its two-node Gauss-Hermite quadrature {0, 2a} with equal
/// weights, which matches the mean and variance exactly. Since every risk
/// functional used here depends on the s_1 law only through its first two
/// moments, optima on the grid agree with the continuous problem.
class DiscretizedToyEnv : public TabularEnv {
  public:
    explicit DiscretizedToyEnv(int n_actions = 201, double lo = -1.0, double hi = 1.0)
        : n_actions_(n_actions) {
        if (n_actions < 2) throw std::invalid_argument("discretized toy: need at least 2 actions");
        grid_.resize(n_actions);
        for (int j = 0; j < n_actions; ++j)
            grid_[j] = lo + (hi - lo) * static_cast<double>(j) / (n_actions - 1);

        std::map<double, int> value_state;
        auto state_of = [&](double v) {
            auto it = value_state.find(v);
            if (it != value_state.end()) return it->second;
            const int id = 1 + static_cast<int>(value_state.size());
            value_state.emplace(v, id);
            s1_values_.push_back(v);
            return id;
        };

        step0_.resize(n_actions);
        for (int j = 0; j < n_actions; ++j) {
            const double a = grid_[j];
            if (a == 0.0) {
                step0_[j] = {{1.0, state_of(0.0), 0.0}};
            } else {
                step0_[j] = {{0.5, state_of(0.0), 0.0}, {0.5, state_of(2.0 * a), 2.0 * a}};
            }
        }
        n_states_ = 2 + static_cast<int>(s1_values_.size());  // start, s1 states, terminal
        terminal_id_ = n_states_ - 1;

        initial_ = {{0, 1.0}};
        step1_.resize(s1_values_.size());
        for (std::size_t k = 0; k < s1_values_.size(); ++k)
            step1_[k] = {{1.0, terminal_id_, 1.0 - s1_values_[k]}};
        empty_ = {};
    }

    int n_states() const override { return n_states_; }
    int n_actions() const override { return n_actions_; }
    int horizon() const override { return 2; }
    const std::vector<std::pair<int, double>>& initial_distribution() const override { return initial_; }

    const std::vector<Outcome>& outcomes(int step, int state, int action) const override {
        if (step == 0 && state == 0) return step0_[action];
        if (state >= 1 && state < terminal_id_) return step1_[state - 1];
        return empty_;
    }

    bool terminal_state(int state) const override { return state == terminal_id_; }

    double action_value(int j) const { return grid_[j]; }
    const std::vector<double>& action_grid() const { return grid_; }

  private:
    int n_actions_;
    int n_states_;
    int terminal_id_;
    std::vector<double> grid_;
    std::vector<double> s1_values_;
    std::vector<std::pair<int, double>> initial_;
    std::vector<std::vector<Outcome>> step0_;
    std::vector<std::vector<Outcome>> step1_;
    std::vector<Outcome> empty_;
};

/// Policy emitting one fixed action at every step.
class ConstantActionPolicy : public Policy {
  public:
    explicit ConstantActionPolicy(double action, ActionSpace space = ActionSpace::real_line())
        : action_(action), space_(space) {}
    double sample_action(int, const StateVec&, Rng&) const override { return action_; }
    double mode_action(int, const StateVec&) const override { return action_; }
    ActionSpace action_space() const override { return space_; }

  private:
    double action_;
    ActionSpace space_;
};

}  // namespace ivo
