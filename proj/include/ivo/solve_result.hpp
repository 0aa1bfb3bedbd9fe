#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ivo/policy.hpp"
#include "ivo/risk.hpp"
#include "ivo/targets.hpp"

namespace ivo {

/// Outcome of one solver run. The report is always computed on fresh
/// evaluation episodes, never on training data.
struct SolveResult {
    std::shared_ptr<Policy> policy;
    TargetSchedule targets;
    RiskReport report;
    std::vector<double> trace;  // objective per iteration / inner evaluation
    std::uint64_t seed = 0;
    int iterations = 0;
    double wall_time_sec = 0.0;
    bool converged = true;
    double fixed_point_gap = 0.0;  // nested: target re-fit certification gap
};

/// Serialize a result into a run directory: policy.txt (flat parameter
/// vector or greedy table), targets.csv, trace.csv, report.txt.
void save_solve_result(const SolveResult& result, const std::string& dir);

}  // namespace ivo
