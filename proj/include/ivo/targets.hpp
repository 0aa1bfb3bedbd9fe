#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ivo/loss.hpp"
#include "ivo/types.hpp"

namespace ivo {

/// Per-step target rewards, the finite-dimensional outer variable of the
/// bilevel formulation. `support_counts[i]` is the number of episodes still
/// running at step i+1 in the sample the schedule was fitted on.
struct TargetSchedule {
    std::vector<double> targets;
    std::vector<std::size_t> support_counts;

    int size() const { return static_cast<int>(targets.size()); }
};

struct FitOptions {
    double arg_tolerance = 1e-9;       // golden-section stop on the argument
    double stationarity_tol = 1e-6;    // |mean l'(r - t)| at the returned t
    int max_bracket_steps = 200;
};

/// Minimize a convex 1-D function by bracket expansion from `start` followed
/// by golden-section search.
double minimize_convex_1d(const std::function<double(double)>& f, double start,
                          const FitOptions& opts = {});

/// Sample median; for even counts, the midpoint of the two central order
/// statistics (any point of the median interval is optimal for the absolute
/// loss).
double sample_median(std::vector<double> values);

/// Fit the per-step targets on a sample: conditional means for the quadratic
/// loss, conditional medians for the absolute loss, and the 1-D minimizer of
/// the empirical expected penalty otherwise. The schedule length is the
/// largest realized horizon in the sample.
TargetSchedule fit_targets(const std::vector<Trajectory>& sample, const LossSpec& loss,
                           const DiscountSpec& disc, const FitOptions& opts = {});

}  // namespace ivo
