#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ivo {

/// Environment-owned state encoding; the core treats it as opaque.
using StateVec = std::vector<double>;

/// For tabular environments the state is a single index.
inline int state_index(const StateVec& s) { return static_cast<int>(s.at(0)); }

/// Compensated (Kahan) accumulator so reductions are insensitive to
/// partitioning order at the 1e-10 relative level required of them.
class KahanSum {
  public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

/// One episode: H actions/rewards and H+1 states.
struct Trajectory {
    std::vector<StateVec> states;
    std::vector<double> actions;
    std::vector<double> rewards;

    int horizon() const { return static_cast<int>(rewards.size()); }

    void validate() const {
        if (rewards.empty()) throw std::runtime_error("trajectory: empty episode");
        if (actions.size() != rewards.size() || states.size() != rewards.size() + 1)
            throw std::runtime_error("trajectory: inconsistent lengths");
    }
};

struct DiscountSpec {
    static constexpr int kUnbounded = -1;

    double gamma = 1.0;
    int max_horizon = kUnbounded;

    DiscountSpec() = default;
    DiscountSpec(double g, int h) : gamma(g), max_horizon(h) { validate(); }

    void validate() const {
        if (!(gamma > 0.0) || gamma > 1.0)
            throw std::invalid_argument("discount: gamma must be in (0,1]");
        if (gamma == 1.0 && max_horizon == kUnbounded)
            throw std::invalid_argument("discount: gamma == 1 requires a finite max horizon");
        if (max_horizon != kUnbounded && max_horizon < 1)
            throw std::invalid_argument("discount: max_horizon must be >= 1");
    }
};

/// Sum_{i=1..horizon} gamma^{i-1}; pass DiscountSpec::kUnbounded for the
/// geometric limit 1/(1-gamma).
inline double cumulated_discount(int horizon, double gamma) {
    if (horizon == DiscountSpec::kUnbounded) {
        if (gamma >= 1.0)
            throw std::invalid_argument("cumulated_discount: unbounded horizon needs gamma < 1");
        return 1.0 / (1.0 - gamma);
    }
    if (horizon < 1) throw std::invalid_argument("cumulated_discount: horizon must be >= 1");
    if (gamma == 1.0) return static_cast<double>(horizon);
    double g = 1.0;
    KahanSum total;
    for (int i = 0; i < horizon; ++i) {
        total.add(g);
        g *= gamma;
    }
    return total.value();
}

/// Sum_{i=1..H} gamma^{i-1} r_i.
inline double discounted_return(const Trajectory& traj, const DiscountSpec& disc) {
    KahanSum total;
    double g = 1.0;
    for (double r : traj.rewards) {
        total.add(g * r);
        g *= disc.gamma;
    }
    return total.value();
}

}  // namespace ivo
