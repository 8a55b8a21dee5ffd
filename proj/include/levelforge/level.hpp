#pragma once

// Types shared by the accelerated level methods (FAPL, FUSL and their
// strongly convex variants).

#include "levelforge/localizer.hpp"
#include "levelforge/stepsize.hpp"
#include "levelforge/trace.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace levelforge {

struct LevelOptions {
    double beta = 0.5;
    double theta = 0.5;
    std::size_t memory_depth = 10;
    StepsizeRule rule{};
    /// Per-phase iteration cap; exceeding it raises PhaseLimitExceeded.
    int max_phase_iterations = 100000;
    ProjectionOptions projection{};
    /// The step-2 radius test is ||x_k - center|| > R (1 + radius_rel_tol).
    double radius_rel_tol = 1e-12;

    /// q = max{beta, 1 - (1 - theta) beta}.
    [[nodiscard]] double contraction() const;
    void validate() const;
};

/// Raised when a single gap-reduction phase runs past max_phase_iterations.
class PhaseLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Global stopping rules of a driver.
struct SolveControl {
    double eps = 1e-6;
    /// Cap on the total number of inner iterations; negative means none.
    std::int64_t max_iterations = -1;
    /// Stop as soon as the upper bound drops to this value (known f* + tol).
    std::optional<double> target_value;
    /// Valid lower bound on f* to combine with the computed one (LB = 0 mode).
    std::optional<double> lower_bound;
};

enum class PhaseExit {
    LevelProven,       // localizer empty or projection outside the ball: lb+ = level
    GapClosed,         // upper bound dropped below level + theta (ub - level)
    SmoothingDoubled,  // smoothed value small but true value not: D+ = 2D
    Interrupted,       // driver-level budget or target hit mid-phase
};

[[nodiscard]] const char* to_string(PhaseExit e);

/// State threaded through one gap-reduction call.
struct LevelPhaseState {
    Vector prox_center;
    double radius = 0.0;
    double level = 0.0;
    double lb = 0.0;
    double ub = 0.0;
    double beta = 0.5;
    double theta = 0.5;
    Bundle bundle;
    Vector x_prev;   // x_{k-1}
    Vector xu_prev;  // x_{k-1}^u
    int k = 0;
    std::size_t memory_depth = 10;
};

struct PhaseResult {
    Vector x_plus;
    double ub_plus = 0.0;  // f(x_plus)
    double lb_plus = 0.0;
    double d_plus = 0.0;   // smoothing estimate on exit (FUSL only)
    PhaseExit termination = PhaseExit::GapClosed;
    int iterations = 0;
    double level = 0.0;
    double eta = 0.0;
};

/// What an observer sees after each inner iteration.
struct IterationView {
    int phase;
    int k;
    const Vector& x_lower;          // x_k^l
    const Vector* x_prox;           // x_k, null when the localizer was empty
    const Vector& x_upper;          // x_k^u
    double f_upper;                 // f(x_k^u)
    const Vector& x_best;           // incumbent with the lowest f seen in the phase
    double f_best;
    double level;
    const Vector& prox_center;
    double radius;
    const Polyhedron& lower_localizer;  // Q_k lower (Q_{k-1} plus the new cut)
    const Bundle* next_bundle;          // Q_k when the phase continues
    double eta;                         // 0 for unsmoothed methods
};

/// Summary of one finished phase.
struct PhaseRecord {
    int phase = 0;
    double lb_in = 0.0;
    double ub_in = 0.0;
    double lb_out = 0.0;
    double ub_out = 0.0;
    int iterations = 0;
    PhaseExit exit = PhaseExit::GapClosed;
    double d_in = 0.0;
    double d_out = 0.0;
    double eta = 0.0;
    double radius = 0.0;
    Vector prox_center;
    Vector x_out;
};

struct SolverObserver {
    std::function<void(const IterationView&)> on_iteration;
    std::function<void(const PhaseRecord&)> on_phase;
};

enum class SolveStatus {
    GapClosed,        // ub - lb <= eps
    TargetReached,    // ub <= target_value
    IterationBudget,  // max_iterations reached first
};

[[nodiscard]] const char* to_string(SolveStatus s);

struct SolveResult {
    Vector x;
    double ub = 0.0;
    double lb = 0.0;
    SolveStatus status = SolveStatus::GapClosed;
    int phases = 0;
    std::int64_t iterations = 0;
    CallCounts calls;
    ConvergenceTrace trace;
    std::vector<PhaseRecord> phase_log;
    double d_final = 0.0;
    int doublings = 0;

    [[nodiscard]] double gap() const { return ub - lb; }
};

/// Bookkeeping shared between a driver and its phases.
struct RunContext {
    CallCounts calls;
    ConvergenceTrace trace;
    Stopwatch clock;
    const SolverObserver* observer = nullptr;
    std::int64_t iterations = 0;
    int phase = 0;
    std::int64_t max_iterations = -1;
    std::optional<double> target_value;

    [[nodiscard]] bool budget_exhausted() const { return max_iterations >= 0 && iterations >= max_iterations; }
    [[nodiscard]] bool target_reached(double ub) const { return target_value && ub <= *target_value; }
    void record(double lb, double ub);
};

}  // namespace levelforge
