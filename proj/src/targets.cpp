#include "ivo/targets.hpp"

#include <cmath>
#include <limits>

namespace ivo {

double sample_median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double minimize_convex_1d(const std::function<double(double)>& f, double start,
                          const FitOptions& opts) {
    // Expand a bracket [lo, hi] around `start` until the midpoint no longer
    // beats both ends (convexity then guarantees the minimum is inside).
    double h = 1.0;
    double lo = start - h, hi = start + h;
    double f_lo = f(lo), f_hi = f(hi), f_mid = f(start);
    int guard = 0;
    while (f_lo < f_mid || f_hi < f_mid) {
        if (++guard > opts.max_bracket_steps)
            throw std::runtime_error("target search: bracket expansion did not terminate (f_lo=" +
                                     std::to_string(f_lo) + ", f_mid=" + std::to_string(f_mid) +
                                     ", f_hi=" + std::to_string(f_hi) + ")");
        h *= 2.0;
        if (f_lo < f_hi) {
            lo = start - h;
            f_lo = f(lo);
        } else {
            hi = start + h;
            f_hi = f(hi);
        }
    }

    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double f_c = f(c), f_d = f(d);
    guard = 0;
    while (b - a > opts.arg_tolerance && ++guard < 400) {
        if (f_c <= f_d) {
            b = d;
            d = c;
            f_d = f_c;
            c = b - inv_phi * (b - a);
            f_c = f(c);
        } else {
            a = c;
            c = d;
            f_c = f_d;
            d = a + inv_phi * (b - a);
            f_d = f(d);
        }
    }
    return 0.5 * (a + b);
}

TargetSchedule fit_targets(const std::vector<Trajectory>& sample, const LossSpec& loss,
                           const DiscountSpec& disc, const FitOptions& opts) {
    (void)disc;  // targets are per-step; the discount enters the penalty, not the fit
    if (sample.empty()) throw std::invalid_argument("fit_targets: empty sample");

    int max_h = 0;
    for (const auto& traj : sample) max_h = std::max(max_h, traj.horizon());

    TargetSchedule schedule;
    schedule.targets.resize(max_h);
    schedule.support_counts.resize(max_h);

    std::vector<double> step_rewards;
    for (int i = 0; i < max_h; ++i) {
        step_rewards.clear();
        for (const auto& traj : sample)
            if (traj.horizon() > i) step_rewards.push_back(traj.rewards[i]);
        schedule.support_counts[i] = step_rewards.size();
        if (step_rewards.empty())
            throw std::runtime_error("fit_targets: no episode reaches step " + std::to_string(i + 1));

        // A single supporting episode pins the target to its reward
        // (zero penalty); support_counts flags it for diagnostics.
        if (step_rewards.size() == 1) {
            schedule.targets[i] = step_rewards[0];
            continue;
        }

        switch (loss.closed_form_target()) {
            case TargetRule::mean: {
                KahanSum sum;
                for (double r : step_rewards) sum.add(r);
                schedule.targets[i] = sum.value() / static_cast<double>(step_rewards.size());
                break;
            }
            case TargetRule::median:
                schedule.targets[i] = sample_median(step_rewards);
                break;
            case TargetRule::numeric: {
                auto objective = [&](double t) {
                    KahanSum sum;
                    for (double r : step_rewards) sum.add(loss.evaluate(r - t));
                    return sum.value() / static_cast<double>(step_rewards.size());
                };
                KahanSum mean;
                for (double r : step_rewards) mean.add(r);
                const double start = mean.value() / static_cast<double>(step_rewards.size());
                const double t = minimize_convex_1d(objective, start, opts);
                if (loss.smooth()) {
                    KahanSum d;
                    for (double r : step_rewards) d.add(loss.derivative(r - t));
                    const double grad = d.value() / static_cast<double>(step_rewards.size());
                    // l'' scales with beta, so the residual at a fixed argument
                    // tolerance does too.
                    if (std::abs(grad) > opts.stationarity_tol * std::max(1.0, loss.beta))
                        throw std::runtime_error("fit_targets: stationarity check failed at step " +
                                                 std::to_string(i + 1) + " (mean l' = " +
                                                 std::to_string(grad) + ")");
                }
                schedule.targets[i] = t;
                break;
            }
        }
        if (!std::isfinite(schedule.targets[i]))
            throw std::runtime_error("fit_targets: non-finite target at step " + std::to_string(i + 1));
    }
    return schedule;
}

}  // namespace ivo
