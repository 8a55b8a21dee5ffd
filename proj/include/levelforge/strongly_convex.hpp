#pragma once

#include "levelforge/fusl.hpp"

namespace levelforge {

struct StrongConvexityInfo {
    double mu;
    double lb0;  // a valid lower bound on f*

    StrongConvexityInfo(double mu_, double lb0_);
};

/// sqrt(2 delta / mu): an incumbent with gap delta lies this close to x*.
[[nodiscard]] double trust_radius(double delta, double mu);

/// FAPL with the prox-center moved to the incumbent and the ball shrunk to
/// trust_radius(ub - lb, mu) at every phase.
[[nodiscard]] SolveResult fapl_sc_solve(const Vector& p0, const StrongConvexityInfo& sc,
                                        const FirstOrderOracle& oracle, const SolveControl& control,
                                        const LevelOptions& opts = {}, const SolverObserver* observer = nullptr);

/// FUSL counterpart of fapl_sc_solve for a strongly convex smooth part.
[[nodiscard]] SolveResult fusl_sc_solve(const Vector& p0, const StrongConvexityInfo& sc, double d1,
                                        const StructuredObjective& obj, const SolveControl& control,
                                        const LevelOptions& opts = {}, const SolverObserver* observer = nullptr);

/// ceil(log_{1/q}((ub1 - lb1) / eps)), the phase cap of both variants.
[[nodiscard]] int sc_phase_count_bound(double initial_gap, double eps, double q);

/// Per-phase iteration cap sqrt(2 c M / (theta beta mu)) + 1 for smooth f.
[[nodiscard]] double sc_phase_bound_smooth(double lipschitz, double mu, double beta, double theta, double c);

}  // namespace levelforge
