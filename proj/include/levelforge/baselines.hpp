#pragma once

#include "levelforge/oracle.hpp"
#include "levelforge/trace.hpp"

#include <optional>

namespace levelforge {

struct NestConfig {
    double lipschitz = 1.0;
    std::int64_t max_iter = 1000;
    /// Stop as soon as f(x_k) <= target.
    std::optional<double> target;
};

struct NestResult {
    Vector x;         // best iterate seen
    double value = 0.0;
    std::int64_t iterations = 0;
    bool target_reached = false;
    CallCounts calls;  // first_order counts gradient calls; f(x_k) for the trace is a monitor call
    ConvergenceTrace trace;
};

/// Accelerated projected gradient with constant step 1/L on a ball, started
/// at x0 (the center when omitted).
[[nodiscard]] NestResult nest_solve(const FirstOrderOracle& oracle, const Ball& ball, const NestConfig& config,
                                    const std::optional<Vector>& x0 = std::nullopt);

}  // namespace levelforge
