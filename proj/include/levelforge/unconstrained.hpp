#pragma once

// Radius-doubling wrapper that turns a ball-constrained solver into one for
// unconstrained problems.

#include "levelforge/fusl.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace levelforge {

struct BallSolveOutcome {
    Vector z;  // lies in B(center, radius)
    double value = 0.0;
    CallCounts calls;
    std::int64_t iterations = 0;
};

/// (center, radius, accuracy, optional warm start inside the ball) -> point
/// whose value is within accuracy of the ball minimum.
using BallSolver =
    std::function<BallSolveOutcome(const Vector& center, double radius, double eps, const Vector* warm_start)>;

[[nodiscard]] BallSolver make_fapl_ball_solver(FirstOrderOracle oracle, LevelOptions opts = {});
[[nodiscard]] BallSolver make_fusl_ball_solver(StructuredObjective obj, double d1, LevelOptions opts = {});

/// f(x_bar) minus the minimum of the linearization at x_bar over B(x_bar, r0).
[[nodiscard]] double initial_gap(const FirstOrderOracle& oracle, const Vector& x_bar, double r0);

struct UnconstrainedOptions {
    double eps_stop = 1e-6;
    int max_rounds = 80;
    /// Stop once delta <= eps_stop / stop_factor.
    double stop_factor = 8.0;
    /// Known optimal value; when set, also stop once f - f* <= eps_stop.
    std::optional<double> known_optimum;
};

enum class UnconstrainedStatus { Converged, KnownOptimumReached, RoundLimit };

[[nodiscard]] const char* to_string(UnconstrainedStatus s);

struct ExpansionState {
    double r = 0.0;
    double delta = 0.0;
    Vector x_star;
    int expansion_count = 0;
};

struct CommitRecord {
    int round = 0;
    double radius = 0.0;
    double delta = 0.0;  // accuracy used for the committed solves
    double value = 0.0;  // f(x_star) after the commit
    int expansions = 0;  // cumulative
};

struct UnconstrainedResult {
    Vector x;
    double value = 0.0;
    UnconstrainedStatus status = UnconstrainedStatus::RoundLimit;
    std::vector<CommitRecord> commits;
    std::vector<double> radii;  // radius of every round attempt, in order
    int expansions = 0;
    CallCounts calls;
    std::int64_t inner_iterations = 0;
    ConvergenceTrace trace;
};

[[nodiscard]] UnconstrainedResult solve_unconstrained(const BallSolver& solver, const FirstOrderOracle& oracle,
                                                      const Vector& x_bar, double r0,
                                                      const UnconstrainedOptions& opts = {});

}  // namespace levelforge
