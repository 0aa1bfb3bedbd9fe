#pragma once

#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ivo/rng.hpp"
#include "ivo/types.hpp"

namespace ivo {

struct ActionSpace {
    enum class Kind { finite, interval };
    Kind kind = Kind::finite;
    int n = 0;          // finite case
    double lo = 0.0;    // interval case
    double hi = 0.0;

    static ActionSpace finite(int n) { return {Kind::finite, n, 0.0, 0.0}; }
    static ActionSpace interval(double lo, double hi) { return {Kind::interval, 0, lo, hi}; }
    static ActionSpace real_line() {
        return interval(-std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity());
    }
};

/// Time-inhomogeneous episodic environment. Transition and reward sampling
/// are deterministic functions of (step, state, action, rng state); episode
/// termination is a predicate on the state alone, with the horizon cap
/// enforced by the rollout engine.
class EnvModel {
  public:
    virtual ~EnvModel() = default;

    virtual StateVec initial_state(Rng& rng) const = 0;

    struct StepResult {
        StateVec next_state;
        double reward;
    };
    /// `step` is 0-based: action a_i taken in s_i yields reward r_{i+1}.
    virtual StepResult step(int step, const StateVec& state, double action, Rng& rng) const = 0;

    virtual bool terminal(const StateVec& state) const = 0;
    virtual ActionSpace action_space() const = 0;
    virtual int max_horizon() const = 0;
    virtual int state_dim() const = 0;
};

/// One exact transition outcome: joint probability of (next state, reward).
struct Outcome {
    double prob;
    int next_state;
    double reward;
};

/// Environments that additionally expose finite enumeration and exact laws,
/// as required by the dynamic-programming solvers. States are indices; the
/// generic EnvModel surface is derived from the exact laws.
class TabularEnv : public EnvModel {
  public:
    virtual int n_states() const = 0;
    virtual int n_actions() const = 0;
    /// Maximum number of steps in any episode (the DP horizon).
    virtual int horizon() const = 0;
    virtual const std::vector<std::pair<int, double>>& initial_distribution() const = 0;
    virtual const std::vector<Outcome>& outcomes(int step, int state, int action) const = 0;
    virtual bool terminal_state(int state) const = 0;

    // EnvModel surface in terms of the exact laws.
    StateVec initial_state(Rng& rng) const override {
        const auto& init = initial_distribution();
        double u = rng.u01();
        for (const auto& [s, p] : init) {
            u -= p;
            if (u < 0.0) return {static_cast<double>(s)};
        }
        return {static_cast<double>(init.back().first)};
    }

    StepResult step(int step, const StateVec& state, double action, Rng& rng) const override {
        const int s = state_index(state);
        const int a = static_cast<int>(action);
        if (a < 0 || a >= n_actions()) throw std::invalid_argument("tabular env: action out of range");
        const auto& outs = outcomes(step, s, a);
        double u = rng.u01();
        for (const auto& o : outs) {
            u -= o.prob;
            if (u < 0.0) return {{static_cast<double>(o.next_state)}, o.reward};
        }
        const auto& last = outs.back();
        return {{static_cast<double>(last.next_state)}, last.reward};
    }

    bool terminal(const StateVec& state) const override { return terminal_state(state_index(state)); }
    ActionSpace action_space() const override { return ActionSpace::finite(n_actions()); }
    int max_horizon() const override { return horizon(); }
    int state_dim() const override { return 1; }
};

/// Tabular environment built from explicit outcome tables. Transition laws
/// may vary by step; a table shorter than the horizon is cycled, so
/// time-homogeneous models store a single step.
class ExplicitTabularEnv : public TabularEnv {
  public:
    ExplicitTabularEnv(int n_states, int n_actions, int horizon,
                       std::vector<std::pair<int, double>> initial,
                       std::vector<std::vector<std::vector<std::vector<Outcome>>>> per_step_laws,
                       std::vector<bool> terminal)
        : n_states_(n_states),
          n_actions_(n_actions),
          horizon_(horizon),
          initial_(std::move(initial)),
          laws_(std::move(per_step_laws)),
          terminal_(std::move(terminal)) {
        if (laws_.empty()) throw std::invalid_argument("explicit env: no transition laws");
        validate();
    }

    int n_states() const override { return n_states_; }
    int n_actions() const override { return n_actions_; }
    int horizon() const override { return horizon_; }
    const std::vector<std::pair<int, double>>& initial_distribution() const override { return initial_; }
    const std::vector<Outcome>& outcomes(int step, int state, int action) const override {
        return laws_[step % laws_.size()][state][action];
    }
    bool terminal_state(int state) const override { return terminal_[state]; }

  private:
    void validate() const {
        double total = 0.0;
        for (const auto& [s, p] : initial_) {
            total += p;
            if (terminal_[s]) throw std::invalid_argument("explicit env: initial state is terminal");
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("explicit env: initial distribution not normalized");
        for (const auto& step_law : laws_)
            for (int s = 0; s < n_states_; ++s)
                for (int a = 0; a < n_actions_; ++a) {
                    if (terminal_[s]) continue;
                    double p = 0.0;
                    for (const auto& o : step_law[s][a]) p += o.prob;
                    if (std::abs(p - 1.0) > 1e-12)
                        throw std::invalid_argument("explicit env: outcome law not normalized");
                }
    }

    int n_states_;
    int n_actions_;
    int horizon_;
    std::vector<std::pair<int, double>> initial_;
    std::vector<std::vector<std::vector<std::vector<Outcome>>>> laws_;
    std::vector<bool> terminal_;
};

}  // namespace ivo
