#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ivo {

enum class LossKind { none, quadratic, absolute, monotone, exponential_oce };

enum class TargetRule { mean, median, numeric };

/// Convex penalty l with l(0) = 0, the per-step building block of the
/// inhomogeneous risk term. `beta` is the risk-aversion coefficient baked
/// into l itself.
struct LossSpec {
    LossKind kind = LossKind::quadratic;
    double beta = 1.0;

    LossSpec() = default;
    LossSpec(LossKind k, double b) : kind(k), beta(b) {
        if (kind != LossKind::none && !(beta > 0.0))
            throw std::invalid_argument("loss: beta must be positive");
    }

    double evaluate(double x) const {
        if (!std::isfinite(x)) throw std::invalid_argument("loss: non-finite argument");
        switch (kind) {
            case LossKind::none:
                return 0.0;
            case LossKind::quadratic:
                return beta * x * x;
            case LossKind::absolute:
                return beta * std::abs(x);
            case LossKind::monotone:
                // Quadratic up to the threshold (2 beta)^-1, affine beyond;
                // C^1 at the switch.
                return x <= 1.0 / (2.0 * beta) ? beta * x * x : x - 1.0 / (4.0 * beta);
            case LossKind::exponential_oce:
                return x - (1.0 - std::exp(-beta * x)) / beta;
        }
        throw std::logic_error("loss: unknown kind");
    }

    double derivative(double x) const {
        if (!std::isfinite(x)) throw std::invalid_argument("loss: non-finite argument");
        switch (kind) {
            case LossKind::none:
                return 0.0;
            case LossKind::quadratic:
                return 2.0 * beta * x;
            case LossKind::absolute:
                return x == 0.0 ? 0.0 : (x > 0.0 ? beta : -beta);
            case LossKind::monotone:
                return x <= 1.0 / (2.0 * beta) ? 2.0 * beta * x : 1.0;
            case LossKind::exponential_oce:
                return 1.0 - std::exp(-beta * x);
        }
        throw std::logic_error("loss: unknown kind");
    }

    TargetRule closed_form_target() const {
        switch (kind) {
            case LossKind::none:
            case LossKind::quadratic:
                return TargetRule::mean;
            case LossKind::absolute:
                return TargetRule::median;
            default:
                return TargetRule::numeric;
        }
    }

    bool smooth() const { return kind != LossKind::absolute; }
};

inline LossKind loss_kind_from_string(const std::string& name) {
    if (name == "none") return LossKind::none;
    if (name == "quadratic") return LossKind::quadratic;
    if (name == "absolute") return LossKind::absolute;
    if (name == "monotone") return LossKind::monotone;
    if (name == "exponential-oce" || name == "exponential_oce") return LossKind::exponential_oce;
    throw std::invalid_argument("unknown loss kind: " + name);
}

inline std::string to_string(LossKind kind) {
    switch (kind) {
        case LossKind::none: return "none";
        case LossKind::quadratic: return "quadratic";
        case LossKind::absolute: return "absolute";
        case LossKind::monotone: return "monotone";
        case LossKind::exponential_oce: return "exponential-oce";
    }
    return "?";
}

}  // namespace ivo
