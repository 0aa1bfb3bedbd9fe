#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "ivo/env.hpp"
#include "ivo/rng.hpp"
#include "ivo/types.hpp"

namespace ivo {

class Policy {
  public:
    virtual ~Policy() = default;
    virtual double sample_action(int step, const StateVec& state, Rng& rng) const = 0;
    /// Modal action; deterministic, used for most-likely paths.
    virtual double mode_action(int step, const StateVec& state) const = 0;
    virtual ActionSpace action_space() const = 0;
};

/// Stochastic policy with a differentiable log-density in its parameters.
class DifferentiablePolicy : public Policy {
  public:
    virtual int n_params() const = 0;
    virtual std::vector<double> params() const = 0;
    virtual void set_params(std::span<const double> theta) = 0;
    virtual double log_density(int step, const StateVec& state, double action) const = 0;
    /// grad += coeff * d log pi(action | state, step) / d theta.
    virtual void accumulate_score(int step, const StateVec& state, double action, double coeff,
                                  std::span<double> grad) const = 0;
    /// Upper bound on the total-variation shift between this policy and
    /// `other` at one (step, state); drives the trust-region cap.
    virtual double shift_upper_bound(const DifferentiablePolicy& other, int step,
                                     const StateVec& state) const = 0;
    virtual std::unique_ptr<DifferentiablePolicy> clone() const = 0;

    std::vector<double> score(int step, const StateVec& state, double action) const {
        std::vector<double> g(n_params(), 0.0);
        accumulate_score(step, state, action, 1.0, g);
        return g;
    }
};

/// Time-indexed softmax policy over a finite state/action grid.
class TabularSoftmaxPolicy : public DifferentiablePolicy {
  public:
    TabularSoftmaxPolicy(int n_steps, int n_states, int n_actions)
        : steps_(n_steps), states_(n_states), actions_(n_actions),
          theta_(static_cast<std::size_t>(n_steps) * n_states * n_actions, 0.0) {}

    int n_steps() const { return steps_; }
    int n_states() const { return states_; }
    int n_actions() const { return actions_; }

    std::vector<double> probs(int step, int state) const {
        const double* row = &theta_[row_offset(step, state)];
        double m = row[0];
        for (int a = 1; a < actions_; ++a) m = std::max(m, row[a]);
        std::vector<double> p(actions_);
        double z = 0.0;
        for (int a = 0; a < actions_; ++a) {
            p[a] = std::exp(row[a] - m);
            z += p[a];
        }
        for (double& v : p) v /= z;
        return p;
    }

    double sample_action(int step, const StateVec& state, Rng& rng) const override {
        auto p = probs(step, state_index(state));
        return static_cast<double>(rng.categorical(p));
    }

    double mode_action(int step, const StateVec& state) const override {
        auto p = probs(step, state_index(state));
        int best = 0;
        for (int a = 1; a < actions_; ++a)
            if (p[a] > p[best]) best = a;  // lowest index wins ties
        return static_cast<double>(best);
    }

    ActionSpace action_space() const override { return ActionSpace::finite(actions_); }

    int n_params() const override { return static_cast<int>(theta_.size()); }
    std::vector<double> params() const override { return theta_; }
    void set_params(std::span<const double> theta) override {
        if (theta.size() != theta_.size()) throw std::invalid_argument("softmax policy: bad parameter size");
        std::copy(theta.begin(), theta.end(), theta_.begin());
    }

    double log_density(int step, const StateVec& state, double action) const override {
        auto p = probs(step, state_index(state));
        return std::log(p[static_cast<int>(action)]);
    }

    void accumulate_score(int step, const StateVec& state, double action, double coeff,
                          std::span<double> grad) const override {
        const int s = state_index(state);
        const int a = static_cast<int>(action);
        auto p = probs(step, s);
        const std::size_t off = row_offset(step, s);
        for (int b = 0; b < actions_; ++b)
            grad[off + b] += coeff * ((b == a ? 1.0 : 0.0) - p[b]);
    }

    double shift_upper_bound(const DifferentiablePolicy& other, int step,
                             const StateVec& state) const override {
        const auto& o = dynamic_cast<const TabularSoftmaxPolicy&>(other);
        auto p = probs(step, state_index(state));
        auto q = o.probs(step, state_index(state));
        double tv = 0.0;
        for (int a = 0; a < actions_; ++a) tv += std::abs(p[a] - q[a]);
        return 0.5 * tv;
    }

    std::unique_ptr<DifferentiablePolicy> clone() const override {
        return std::make_unique<TabularSoftmaxPolicy>(*this);
    }

    double& logit(int step, int state, int action) {
        return theta_[row_offset(step, state) + action];
    }

  private:
    std::size_t row_offset(int step, int state) const {
        return (static_cast<std::size_t>(step) * states_ + state) * actions_;
    }

    int steps_, states_, actions_;
    std::vector<double> theta_;
};

/// Gaussian policy with a linear mean on user-supplied features and a shared
/// learned log-std. With `squash` enabled the pre-action u ~ N(mu, sigma^2)
/// is mapped through a logistic to (0, 1); the squash Jacobian does not
/// depend on the parameters, so scores and density ratios are computed in
/// u-space.
class GaussianPolicy : public DifferentiablePolicy {
  public:
    using FeatureFn = std::function<std::vector<double>(const StateVec&)>;

    GaussianPolicy(int n_features, FeatureFn features, bool squash, double init_log_std = -1.0)
        : n_features_(n_features), features_(std::move(features)), squash_(squash),
          theta_(static_cast<std::size_t>(n_features) + 1, 0.0) {
        theta_.back() = init_log_std;
    }

    static double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
    static double logit(double a) {
        const double eps = 1e-12;
        a = std::clamp(a, eps, 1.0 - eps);
        return std::log(a / (1.0 - a));
    }

    double mean(const StateVec& state) const {
        auto phi = features_(state);
        double m = 0.0;
        for (int j = 0; j < n_features_; ++j) m += theta_[j] * phi[j];
        return m;
    }

    double log_std() const { return std::clamp(theta_.back(), kMinLogStd, kMaxLogStd); }
    double stddev() const { return std::exp(log_std()); }

    double sample_action(int /*step*/, const StateVec& state, Rng& rng) const override {
        const double u = mean(state) + stddev() * rng.normal();
        return squash_ ? logistic(u) : u;
    }

    double mode_action(int /*step*/, const StateVec& state) const override {
        const double u = mean(state);
        return squash_ ? logistic(u) : u;
    }

    ActionSpace action_space() const override {
        return squash_ ? ActionSpace::interval(0.0, 1.0) : ActionSpace::real_line();
    }

    int n_params() const override { return static_cast<int>(theta_.size()); }
    std::vector<double> params() const override { return theta_; }
    void set_params(std::span<const double> theta) override {
        if (theta.size() != theta_.size()) throw std::invalid_argument("gaussian policy: bad parameter size");
        std::copy(theta.begin(), theta.end(), theta_.begin());
    }

    double log_density(int /*step*/, const StateVec& state, double action) const override {
        const double u = squash_ ? logit(action) : action;
        const double s = stddev();
        const double z = (u - mean(state)) / s;
        return -0.5 * z * z - std::log(s) - 0.9189385332046727;  // log sqrt(2 pi)
    }

    void accumulate_score(int /*step*/, const StateVec& state, double action, double coeff,
                          std::span<double> grad) const override {
        const double u = squash_ ? logit(action) : action;
        const double s = stddev();
        const double z = (u - mean(state)) / s;
        auto phi = features_(state);
        for (int j = 0; j < n_features_; ++j) grad[j] += coeff * z / s * phi[j];
        const bool clamped = theta_.back() < kMinLogStd || theta_.back() > kMaxLogStd;
        if (!clamped) grad[n_features_] += coeff * (z * z - 1.0);
    }

    double shift_upper_bound(const DifferentiablePolicy& other, int step,
                             const StateVec& state) const override {
        (void)step;
        const auto& o = dynamic_cast<const GaussianPolicy&>(other);
        const double m1 = mean(state), s1 = stddev();
        const double m2 = o.mean(state), s2 = o.stddev();
        const double kl = std::log(s2 / s1) + (s1 * s1 + (m1 - m2) * (m1 - m2)) / (2.0 * s2 * s2) - 0.5;
        return std::sqrt(std::max(0.0, kl) / 2.0);  // Pinsker
    }

    std::unique_ptr<DifferentiablePolicy> clone() const override {
        return std::make_unique<GaussianPolicy>(*this);
    }

  private:
    static constexpr double kMinLogStd = -6.0;
    static constexpr double kMaxLogStd = 2.0;

    int n_features_;
    FeatureFn features_;
    bool squash_;
    std::vector<double> theta_;
};

/// Deterministic time-indexed action table, e.g. the greedy output of the
/// dynamic-programming solver.
class GreedyTablePolicy : public Policy {
  public:
    GreedyTablePolicy(int n_steps, int n_states, int n_actions)
        : states_(n_states), actions_(n_actions),
          table_(static_cast<std::size_t>(n_steps) * n_states, 0) {}

    int& action_at(int step, int state) { return table_[static_cast<std::size_t>(step) * states_ + state]; }
    int action_at(int step, int state) const { return table_[static_cast<std::size_t>(step) * states_ + state]; }
    int n_steps() const { return static_cast<int>(table_.size()) / states_; }

    double sample_action(int step, const StateVec& state, Rng&) const override {
        return static_cast<double>(action_at(step, state_index(state)));
    }
    double mode_action(int step, const StateVec& state) const override {
        return static_cast<double>(action_at(step, state_index(state)));
    }
    ActionSpace action_space() const override { return ActionSpace::finite(actions_); }

    const std::vector<int>& table() const { return table_; }

  private:
    int states_, actions_;
    std::vector<int> table_;
};

}  // namespace ivo
